//! Time evolution along a parameter path, and the adiabatic-limit
//! reconstruction `U = Σ_α e^{i(φ_α+ψ_α)} |Φ_α(end)⟩⟨Φ_α(start)|`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{eigensystem, unitary_exp, Operator, C64};
use crate::schedule::{ParamPath, SegmentKind};

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub unitary: Operator,
    pub step_count: usize,
    pub max_unitarity_defect: f64,
}

/// Per-level phases, labeled by ascending energy at the first
/// non-degenerate grid point.
#[derive(Clone, Debug, Serialize)]
pub struct AdiabaticPhases {
    /// `φ_α = −∫ E_α dt`.
    pub dynamical: Vec<f64>,
    /// `ψ_α`, relative to the canonical gauge at both ends.
    pub geometric: Vec<f64>,
}

fn steps_for(duration: f64, steps_per_unit_time: f64) -> usize {
    ((duration * steps_per_unit_time).ceil() as usize).max(1)
}

/// Midpoint piecewise-constant propagation over the whole path.
///
/// Each segment of duration `τ` is cut into `⌈τ·steps_per_unit_time⌉`
/// equal steps; jumps contribute no evolution.
pub fn evolve<F>(path: &ParamPath, builder: F, steps_per_unit_time: f64) -> Result<EvolutionResult>
where
    F: Fn(&[f64]) -> Operator,
{
    evolve_segments(path, builder, steps_per_unit_time, 0..path.segments().len())
}

/// Propagation over a contiguous range of segments. Splitting a path at a
/// segment boundary and composing the pieces reproduces [`evolve`].
pub fn evolve_segments<F>(
    path: &ParamPath,
    builder: F,
    steps_per_unit_time: f64,
    range: std::ops::Range<usize>,
) -> Result<EvolutionResult>
where
    F: Fn(&[f64]) -> Operator,
{
    if !(steps_per_unit_time > 0.0) || !steps_per_unit_time.is_finite() {
        return Err(Error::InvalidParameter("steps per unit time must be positive".into()));
    }
    let dim = builder(&path.start_values()).dim();
    let mut u = Operator::identity(dim);
    let mut steps = 0;
    let mut worst = 0.0_f64;
    for idx in range {
        let seg = &path.segments()[idx];
        if seg.kind == SegmentKind::Jump || seg.duration == 0.0 {
            continue;
        }
        let n = steps_for(seg.duration, steps_per_unit_time);
        let dt = seg.duration / n as f64;
        for k in 0..n {
            let v = path.eval_segment(idx, (k as f64 + 0.5) / n as f64);
            let h = builder(&v);
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
            u = &unitary_exp(&h, dt)? * &u;
        }
        steps += n;
        worst = worst.max(u.unitarity_defect());
    }
    worst = worst.max(u.unitarity_defect());
    if !worst.is_finite() {
        return Err(Error::Numerical("non-finite propagator".into()));
    }
    Ok(EvolutionResult { unitary: u, step_count: steps, max_unitarity_defect: worst })
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Eigen-decomposition grouped into clusters of equal energy.
struct Clusters {
    energies: Vec<f64>,
    /// Orthonormal basis of each cluster.
    bases: Vec<Vec<Vec<C64>>>,
    degenerate: bool,
}

fn clusters_of(h: &Operator) -> Result<Clusters> {
    let s = eigensystem(h, None)?;
    let tol = 1e-10 * h.max_abs().max(1.0);
    let mut energies = Vec::new();
    let mut bases: Vec<Vec<Vec<C64>>> = Vec::new();
    for (k, &e) in s.values.iter().enumerate() {
        let v = s.vector(k);
        match energies.last() {
            Some(&last) if e - last <= tol => bases.last_mut().expect("cluster").push(v),
            _ => {
                energies.push(e);
                bases.push(vec![v]);
            }
        }
    }
    let degenerate = bases.iter().any(|b| b.len() > 1);
    Ok(Clusters { energies, bases, degenerate })
}

/// Moves each tracked vector into the eigenspace it overlaps most, keeping
/// `⟨old|new⟩` real and positive (discrete parallel transport). Returns the
/// energy of each tracked level.
fn transport(tracked: &mut [Vec<C64>], h: &Operator, t: f64) -> Result<Vec<f64>> {
    let cl = clusters_of(h)?;
    let mut assigned = vec![0usize; tracked.len()];
    for (a, w) in tracked.iter_mut().enumerate() {
        let (best, weight) = cl
            .bases
            .iter()
            .enumerate()
            .map(|(c, basis)| (c, basis.iter().map(|b| inner(b, w).norm_sqr()).sum::<f64>()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let overlap = weight.max(0.0).sqrt();
        if overlap < 0.5 {
            return Err(Error::UntrackableCrossing { t, overlap });
        }
        let mut p = vec![C64::default(); w.len()];
        for b in &cl.bases[best] {
            let ov = inner(b, w);
            for (pi, bi) in p.iter_mut().zip(b) {
                *pi += ov * bi;
            }
        }
        normalize(&mut p);
        *w = p;
        assigned[a] = best;
    }
    // restore orthonormality inside shared clusters, in label order
    for a in 0..tracked.len() {
        for b in 0..a {
            if assigned[a] == assigned[b] {
                let ov = inner(&tracked[b], &tracked[a]);
                let prev = tracked[b].clone();
                for (x, y) in tracked[a].iter_mut().zip(&prev) {
                    *x -= ov * y;
                }
            }
        }
        if normalize(&mut tracked[a]) < 1e-8 {
            return Err(Error::UntrackableCrossing { t, overlap: 0.0 });
        }
    }
    Ok(assigned.iter().map(|&c| cl.energies[c]).collect())
}

fn canonical_phase_of(v: &[C64]) -> f64 {
    let max = v.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    let k = v.iter().position(|z| z.norm() >= max - 1e-9).unwrap_or(0);
    v[k].arg()
}

/// Adiabatic-limit gate from eigenstate tracking.
///
/// Every segment of positive duration is sampled at `grid_points + 1`
/// nodes. Dynamical phases use the trapezoid rule on the tracked energies;
/// geometric phases come from parallel transport of the eigenvectors, so
/// the discrete Berry phase is the accumulated overlap phase. Degenerate
/// points (for example `H = 0`) carry the previous vectors over, and the
/// initial eigenbasis is seeded from the first non-degenerate node.
pub fn adiabatic_oracle<F>(path: &ParamPath, builder: F, grid_points: usize) -> Result<(Operator, AdiabaticPhases)>
where
    F: Fn(&[f64]) -> Operator,
{
    if grid_points == 0 {
        return Err(Error::InvalidParameter("grid_points must be positive".into()));
    }
    // time-ordered nodes (segment index, fraction); jumps appear as their end values
    let mut nodes: Vec<(f64, Vec<f64>)> = Vec::new();
    let starts = path.segment_starts();
    for (idx, seg) in path.segments().iter().enumerate() {
        if seg.kind == SegmentKind::Jump || seg.duration == 0.0 {
            continue;
        }
        for k in 0..=grid_points {
            let u = k as f64 / grid_points as f64;
            nodes.push((starts[idx] + u * seg.duration, path.eval_segment(idx, u)));
        }
    }
    if nodes.is_empty() {
        return Err(Error::InvalidParameter("path has no duration".into()));
    }
    let hams: Vec<Operator> = nodes.iter().map(|(_, v)| builder(v)).collect();
    let dim = hams[0].dim();
    if let Some(bad) = hams.iter().find(|h| h.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }

    let seed = hams
        .iter()
        .map(clusters_of)
        .find_map(|c| match c {
            Ok(c) if !c.degenerate => Some(Ok(c)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .unwrap_or_else(|| clusters_of(&hams[0]))?;
    let mut tracked: Vec<Vec<C64>> = seed.bases.into_iter().flatten().collect();

    let mut energies = transport(&mut tracked, &hams[0], nodes[0].0)?;
    let start_vectors = tracked.clone();
    let mut dynamical = vec![0.0; dim];
    for i in 1..nodes.len() {
        let t_prev = nodes[i - 1].0;
        let t = nodes[i].0;
        let e_new = transport(&mut tracked, &hams[i], t)?;
        let dt = t - t_prev;
        if dt > 0.0 {
            for a in 0..dim {
                dynamical[a] -= 0.5 * (energies[a] + e_new[a]) * dt;
            }
        }
        energies = e_new;
    }

    let geometric: Vec<f64> = (0..dim)
        .map(|a| {
            let g = canonical_phase_of(&tracked[a]) - canonical_phase_of(&start_vectors[a]);
            // wrap to (−π, π]
            let w = g.rem_euclid(2.0 * std::f64::consts::PI);
            if w > std::f64::consts::PI { w - 2.0 * std::f64::consts::PI } else { w }
        })
        .collect();

    let mut u = DMatrix::<C64>::zeros(dim, dim);
    for a in 0..dim {
        let ph = C64::from_polar(1.0, dynamical[a]);
        for i in 0..dim {
            for j in 0..dim {
                u[(i, j)] += ph * tracked[a][i] * start_vectors[a][j].conj();
            }
        }
    }
    Ok((Operator::from_matrix(u), AdiabaticPhases { dynamical, geometric }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{h1, QubitParams};
    use crate::schedule::{ParamPath, RampShape, Segment};

    fn detuning_builder(v: &[f64]) -> Operator {
        h1(QubitParams::new(v[0], 0.0, 0.0))
    }

    #[test]
    fn constant_detuning_gives_diagonal_phases() {
        let (delta, t) = (0.7, 3.0);
        let path = ParamPath::new(&["delta"], vec![Segment::hold(t, vec![delta])]).unwrap();
        let r = evolve(&path, detuning_builder, 16.0).unwrap();
        let expect = Operator::diagonal(&[
            C64::from_polar(1.0, -delta * t / 2.0),
            C64::from_polar(1.0, delta * t / 2.0),
        ]);
        assert!(r.unitary.max_abs_diff(&expect) < 1e-13);
        assert_eq!(r.step_count, 48);
    }

    #[test]
    fn oracle_on_constant_path() {
        let (delta, t) = (0.7, 3.0);
        let path = ParamPath::new(&["delta"], vec![Segment::hold(t, vec![delta])]).unwrap();
        let (u, ph) = adiabatic_oracle(&path, detuning_builder, 50).unwrap();
        // ascending labels: |1⟩ at −Δ/2, |0⟩ at +Δ/2
        assert!((ph.dynamical[0] - delta / 2.0 * t).abs() < 1e-12);
        assert!((ph.dynamical[1] + delta / 2.0 * t).abs() < 1e-12);
        assert!(ph.geometric.iter().all(|g| g.abs() < 1e-12));
        let e = evolve(&path, detuning_builder, 16.0).unwrap();
        assert!(u.max_abs_diff(&e.unitary) < 1e-12);
    }

    #[test]
    fn zero_steps_rejected() {
        let path = ParamPath::new(&["delta"], vec![Segment::hold(1.0, vec![1.0])]).unwrap();
        assert!(evolve(&path, detuning_builder, 0.0).is_err());
        assert!(adiabatic_oracle(&path, detuning_builder, 0).is_err());
    }

    #[test]
    fn dimension_change_rejected() {
        let path = ParamPath::new(
            &["x"],
            vec![Segment::ramp(1.0, vec![0.0], vec![1.0], RampShape::Linear)],
        )
        .unwrap();
        let b = |v: &[f64]| if v[0] > 0.5 { Operator::zeros(3) } else { Operator::zeros(2) };
        assert!(matches!(evolve(&path, b, 8.0), Err(Error::DimensionMismatch { .. })));
    }
}
