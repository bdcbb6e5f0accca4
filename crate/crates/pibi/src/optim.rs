//! Small deterministic derivative-free optimizers.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Evenly spaced grid including both endpoints, then golden-section
/// refinement on the bracket around the best grid point.
///
/// The refined point is only accepted if it improves on the grid minimum,
/// so the result never exceeds any grid value.
pub fn grid_then_golden(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    points: usize,
    tol: f64,
) -> (f64, f64) {
    let points = points.max(3);
    let step = (b - a) / (points - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..points {
        let v = f(a + step * i as f64);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = a + step * best_i.saturating_sub(1) as f64;
    let hi = a + step * (best_i + 1).min(points - 1) as f64;
    let (x, fx) = golden_section(&f, lo, hi, tol);
    if fx < best {
        (x, fx)
    } else {
        (a + step * best_i as f64, best)
    }
}

/// Options for [`nelder_mead`].
#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop once the spread of simplex values drops below this.
    pub f_tol: f64,
    /// Also require the simplex diameter to drop below this.
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.3,
            f_tol: 1e-9,
            x_tol: 1e-7,
            max_evals: 4000,
        }
    }
}

/// Result of a local search.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Standard Nelder–Mead simplex search (reflection 1, expansion 2,
/// contraction ½, shrink ½).
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: NelderMeadOptions) -> Minimum {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = dim + 1;
    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let spread = values[dim] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= opts.f_tol && diameter <= opts.x_tol {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|v| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < values[0] {
            let xe = along(2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[dim] = xe;
                values[dim] = fe;
            } else {
                simplex[dim] = xr;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = xr;
            values[dim] = fr;
        } else {
            let (xc, fc) = if fr < values[dim] {
                let x = along(0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(-0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < values[dim].min(fr) {
                simplex[dim] = xc;
                values[dim] = fc;
            } else {
                for i in 1..=dim {
                    simplex[i] = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    values[i] = f(&simplex[i]);
                }
                evals += dim;
            }
        }
    }
    let best = (0..=dim)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty simplex");
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        evals,
    }
}

/// Element `index` (from 1) of the Halton sequence in `[0,1)^dim`.
pub fn halton(index: usize, dim: usize) -> Vec<f64> {
    const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    assert!(dim <= PRIMES.len());
    PRIMES[..dim]
        .iter()
        .map(|&base| {
            let (mut i, mut f, mut r) = (index, 1.0, 0.0);
            while i > 0 {
                f /= base as f64;
                r += f * (i % base) as f64;
                i /= base;
            }
            r
        })
        .collect()
}

/// Runs [`nelder_mead`] from each start and keeps the best result.
pub fn multi_start(
    f: impl Fn(&[f64]) -> f64,
    starts: impl IntoIterator<Item = Vec<f64>>,
    opts: NelderMeadOptions,
) -> Option<Minimum> {
    let mut best: Option<Minimum> = None;
    for s in starts {
        let m = nelder_mead(&f, &s, opts);
        if best.as_ref().map_or(true, |b| m.value < b.value) {
            best = Some(m);
        }
    }
    best
}
