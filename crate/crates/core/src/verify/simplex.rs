//! Minimal Nelder–Mead simplex descent used by the sharpness probe.
//! Standard coefficients: reflection 1.0, expansion 2.0, contraction 0.5,
//! shrink 0.5. Parameters that leave the admissible region are projected
//! back by the supplied projection before every evaluation.

/// One accepted simplex step, for the evaluation trace.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TraceRow {
    pub evaluation: usize,
    pub objective: f64,
    pub params: Vec<f64>,
}

pub struct SimplexOutcome {
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    pub evaluations: usize,
    pub trace: Vec<TraceRow>,
    /// Count of evaluations whose parameters had to be projected back.
    pub projections: usize,
}

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `objective` starting from `x0`, stepping `step` along each
/// coordinate for the initial simplex. `project` clamps a parameter vector
/// into the admissible region (identity when nothing moved).
pub fn nelder_mead<F, P>(
    mut objective: F,
    project: P,
    x0: &[f64],
    step: f64,
    max_iterations: usize,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
    P: Fn(&mut Vec<f64>),
{
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut projections = 0usize;
    let mut trace = Vec::new();

    let mut eval = |x: &mut Vec<f64>,
                    evaluations: &mut usize,
                    projections: &mut usize,
                    trace: &mut Vec<TraceRow>|
     -> f64 {
        let before = x.clone();
        project(x);
        if *x != before {
            *projections += 1;
        }
        *evaluations += 1;
        let v = objective(x);
        trace.push(TraceRow { evaluation: *evaluations, objective: v, params: x.clone() });
        v
    };

    // Initial simplex: x0 plus one vertex per coordinate direction.
    let mut points: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let mut base = x0.to_vec();
    let v0 = eval(&mut base, &mut evaluations, &mut projections, &mut trace);
    points.push((base, v0));
    for i in 0..dim {
        let mut xi = x0.to_vec();
        xi[i] += step;
        let vi = eval(&mut xi, &mut evaluations, &mut projections, &mut trace);
        points.push((xi, vi));
    }

    for _ in 0..max_iterations {
        points.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = points[dim].clone();
        let second_worst = points[dim - 1].1;
        let best = points[0].1;

        // Centroid of all but the worst.
        let mut centroid = vec![0.0; dim];
        for (x, _) in points.iter().take(dim) {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }

        let blend = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let mut reflected = blend(REFLECTION);
        let fr = eval(&mut reflected, &mut evaluations, &mut projections, &mut trace);

        if fr < best {
            let mut expanded = blend(EXPANSION);
            let fe = eval(&mut expanded, &mut evaluations, &mut projections, &mut trace);
            points[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < second_worst {
            points[dim] = (reflected, fr);
        } else {
            let mut contracted = blend(-CONTRACTION);
            let fc = eval(&mut contracted, &mut evaluations, &mut projections, &mut trace);
            if fc < worst.1 {
                points[dim] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                let anchor = points[0].0.clone();
                for point in points.iter_mut().skip(1) {
                    let mut x: Vec<f64> = anchor
                        .iter()
                        .zip(&point.0)
                        .map(|(a, b)| a + SHRINK * (b - a))
                        .collect();
                    let v = eval(&mut x, &mut evaluations, &mut projections, &mut trace);
                    *point = (x, v);
                }
            }
        }
    }

    points.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexOutcome {
        best_params: points[0].0.clone(),
        best_objective: points[0].1,
        evaluations,
        trace,
        projections,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let out = nelder_mead(
            |x| (x[0] - 1.5).powi(2) + (x[1] + 0.5).powi(2),
            |_| {},
            &[0.0, 0.0],
            0.5,
            400,
        );
        assert!((out.best_params[0] - 1.5).abs() < 1e-4, "{:?}", out.best_params);
        assert!((out.best_params[1] + 0.5).abs() < 1e-4);
        assert!(out.best_objective < 1e-7);
    }

    #[test]
    fn projection_keeps_iterates_admissible() {
        let out = nelder_mead(
            |x| (x[0] - 2.0).powi(2),
            |x| {
                if x[0] > 0.9 {
                    x[0] = 0.9;
                }
            },
            &[0.0],
            0.3,
            200,
        );
        assert!((out.best_params[0] - 0.9).abs() < 1e-9);
        assert!(out.projections > 0);
    }

    #[test]
    fn one_dimensional_search_works() {
        let out = nelder_mead(|x| (x[0]).cos(), |_| {}, &[2.5], 0.2, 300);
        assert!((out.best_params[0] - std::f64::consts::PI).abs() < 1e-3);
    }
}
