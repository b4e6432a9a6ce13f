//! Nelder-Mead downhill simplex minimizer.

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct NelderMead {
    /// Stop once every vertex lies within this distance (max-norm) of the best.
    pub diameter_tol: f64,
    pub max_iterations: usize,
    reflection: f64,
    expansion: f64,
    contraction: f64,
    shrink: f64,
}

impl NelderMead {
    pub fn new(diameter_tol: f64, max_iterations: usize) -> Self {
        NelderMead {
            diameter_tol,
            max_iterations,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }

    /// Minimizes `f` from `start`, building the initial simplex by stepping
    /// `steps[i]` along each coordinate axis.
    pub fn minimize<F>(&self, f: F, start: &[f64], steps: &[f64]) -> Minimum
    where
        F: Fn(&[f64]) -> f64,
    {
        assert_eq!(start.len(), steps.len(), "one step per coordinate");
        let dim = start.len();
        let eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        if dim == 0 {
            return Minimum {
                x: Vec::new(),
                value: eval(start),
                iterations: 0,
                converged: true,
            };
        }

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
        simplex.push(start.to_vec());
        for (i, step) in steps.iter().enumerate() {
            let mut vertex = start.to_vec();
            vertex[i] += if *step == 0.0 { 1e-3 } else { *step };
            simplex.push(vertex);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

        let mut iterations = 0;
        let mut converged = false;
        loop {
            // Stable sort keeps the ordering deterministic on ties.
            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            if diameter(&simplex) < self.diameter_tol {
                converged = true;
                break;
            }
            if iterations >= self.max_iterations {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
                .collect();
            let worst = &simplex[dim];
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(worst)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = along(self.reflection);
            let f_reflected = eval(&reflected);
            if f_reflected < values[0] {
                let expanded = along(self.reflection * self.expansion);
                let f_expanded = eval(&expanded);
                if f_expanded < f_reflected {
                    simplex[dim] = expanded;
                    values[dim] = f_expanded;
                } else {
                    simplex[dim] = reflected;
                    values[dim] = f_reflected;
                }
                continue;
            }
            if f_reflected < values[dim - 1] {
                simplex[dim] = reflected;
                values[dim] = f_reflected;
                continue;
            }

            let (candidate, f_candidate) = if f_reflected < values[dim] {
                let outside = along(self.reflection * self.contraction);
                let f_outside = eval(&outside);
                (outside, f_outside)
            } else {
                let inside = along(-self.contraction);
                let f_inside = eval(&inside);
                (inside, f_inside)
            };
            if f_candidate < values[dim].min(f_reflected) {
                simplex[dim] = candidate;
                values[dim] = f_candidate;
                continue;
            }

            let best = simplex[0].clone();
            for i in 1..=dim {
                for (x, b) in simplex[i].iter_mut().zip(&best) {
                    *x = b + self.shrink * (*x - b);
                }
                values[i] = eval(&simplex[i]);
            }
        }

        Minimum {
            x: simplex[0].clone(),
            value: values[0],
            iterations,
            converged,
        }
    }
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .flat_map(|v| v.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}
