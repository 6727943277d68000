//! Local minimizers for the seed-space objective: a Nelder-Mead simplex
//! search followed by a BFGS polish with central-difference gradients.
//! Everything runs in `f64`; callers convert at the boundary.

pub struct OptimResult {
    pub x: Vec<f64>,
    pub fval: f64,
    pub evals: usize,
}

pub fn nelder_mead<F>(
    f: &mut F,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    ftol: f64,
) -> OptimResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        let fval = f(x0);
        return OptimResult { x: x0.to_vec(), fval, evals: 1 };
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut evals = 0;
    let eval = |f: &mut F, x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| eval(f, v, &mut evals)).collect();

    for _ in 0..max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = (fvals[worst] - fvals[best]).abs();
        let scale = fvals[best].abs().max(1e-30);
        if spread <= ftol * scale || spread <= 1e-300 {
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for (i, v) in simplex.iter().enumerate() {
            if i == worst {
                continue;
            }
            for j in 0..n {
                centroid[j] += v[j] / n as f64;
            }
        }

        let mix = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(&u, &v)| u + t * (v - u)).collect()
        };

        let reflected = mix(&centroid, &simplex[worst], -alpha);
        let fr = eval(f, &reflected, &mut evals);
        if fr < fvals[best] {
            let expanded = mix(&centroid, &simplex[worst], -gamma);
            let fe = eval(f, &expanded, &mut evals);
            if fe < fr {
                simplex[worst] = expanded;
                fvals[worst] = fe;
            } else {
                simplex[worst] = reflected;
                fvals[worst] = fr;
            }
        } else if fr < fvals[second_worst] {
            simplex[worst] = reflected;
            fvals[worst] = fr;
        } else {
            let contracted = if fr < fvals[worst] {
                mix(&centroid, &simplex[worst], -rho)
            } else {
                mix(&centroid, &simplex[worst], rho)
            };
            let fc = eval(f, &contracted, &mut evals);
            if fc < fvals[worst].min(fr) {
                simplex[worst] = contracted;
                fvals[worst] = fc;
            } else {
                // shrink toward the best vertex
                let best_point = simplex[best].clone();
                for i in 0..=n {
                    if i == best {
                        continue;
                    }
                    simplex[i] = mix(&best_point, &simplex[i], sigma);
                    fvals[i] = eval(f, &simplex[i], &mut evals);
                }
            }
        }
    }

    let (mut bi, mut bf) = (0, fvals[0]);
    for (i, &fv) in fvals.iter().enumerate().skip(1) {
        if fv < bf {
            bi = i;
            bf = fv;
        }
    }
    OptimResult { x: simplex.swap_remove(bi), fval: bf, evals }
}

fn gradient<F>(f: &mut F, x: &[f64], fx: f64, evals: &mut usize) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        let h = 1e-6 * (1.0 + x[i].abs());
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        *evals += 2;
        g[i] = if fp.is_finite() && fm.is_finite() {
            (fp - fm) / (2.0 * h)
        } else if fp.is_finite() {
            (fp - fx) / h
        } else if fm.is_finite() {
            (fx - fm) / h
        } else {
            0.0
        };
    }
    g
}

/// BFGS with backtracking line search; infinite objective values act as a
/// barrier. Returns the best point seen.
pub fn bfgs_polish<F>(f: &mut F, x0: &[f64], max_iters: usize, gtol: f64) -> OptimResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 1;
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if n == 0 || !fx.is_finite() {
        return OptimResult { x, fval: fx, evals };
    }

    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut g = gradient(f, &x, fx, &mut evals);

    for _ in 0..max_iters {
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < gtol * (1.0 + fx.abs()) {
            break;
        }
        // direction = -H g
        let mut dir = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                dir[i] -= h[i][j] * g[j];
            }
        }
        let slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if slope >= 0.0 {
            // reset to steepest descent
            for (i, row) in h.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = if i == j { 1.0 } else { 0.0 };
                }
            }
            for i in 0..n {
                dir[i] = -g[i];
            }
        }

        let mut t = 1.0;
        let mut accepted = false;
        let mut xn = x.clone();
        let mut fn_ = fx;
        for _ in 0..40 {
            for i in 0..n {
                xn[i] = x[i] + t * dir[i];
            }
            fn_ = f(&xn);
            evals += 1;
            if fn_.is_finite() && fn_ <= fx + 1e-4 * t * slope.min(0.0) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || (fx - fn_).abs() <= 1e-16 * (1.0 + fx.abs()) {
            break;
        }

        let gn = gradient(f, &xn, fn_, &mut evals);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-12 {
            // H <- (I - s y'/sy) H (I - y s'/sy) + s s'/sy
            let mut hy = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    hy[i] += h[i][j] * y[j];
                }
            }
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += (sy + yhy) * s[i] * s[j] / (sy * sy)
                        - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
        x = xn;
        fx = fn_;
        g = gn;
    }
    OptimResult { x, fval: fx, evals }
}
