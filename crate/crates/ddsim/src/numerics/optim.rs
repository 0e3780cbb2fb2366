//! Golden-section refinement and a small Nelder-Mead simplex.

/// Golden-section search for the maximum of a unimodal `f` on [lo, hi].
/// Returns the abscissa of the maximum to within `xtol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > xtol {
        if fc > fd {
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
    0.5 * (a + b)
}

/// Result of a simplex minimization.
#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub fval: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder-Mead downhill simplex minimizing `f`, started at `x0` with
/// per-coordinate initial steps `scale`. Stops when the simplex function
/// spread drops below `ftol` (relative) or after `max_iter` iterations.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    scale: &[f64],
    ftol: f64,
    max_iter: usize,
) -> SimplexOutcome {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += if scale[i] != 0.0 { scale[i] } else { 1e-4 };
        pts.push(p);
    }
    let mut fv: Vec<f64> = pts.iter().map(|p| f(p)).collect();

    let order = |pts: &mut Vec<Vec<f64>>, fv: &mut Vec<f64>| {
        let mut idx: Vec<usize> = (0..fv.len()).collect();
        idx.sort_by(|&i, &j| fv[i].total_cmp(&fv[j]));
        let np: Vec<Vec<f64>> = idx.iter().map(|&i| pts[i].clone()).collect();
        let nf: Vec<f64> = idx.iter().map(|&i| fv[i]).collect();
        *pts = np;
        *fv = nf;
    };

    let mut iter = 0;
    loop {
        order(&mut pts, &mut fv);
        let spread = (fv[n] - fv[0]).abs();
        let scale_f = fv[0].abs().max(fv[n].abs()).max(1e-300);
        if spread <= ftol * scale_f || iter >= max_iter {
            return SimplexOutcome {
                x: pts[0].clone(),
                fval: fv[0],
                iterations: iter,
                converged: spread <= ftol * scale_f,
            };
        }
        iter += 1;

        // centroid of all but the worst
        let mut cen = vec![0.0; n];
        for p in pts.iter().take(n) {
            for (c, &v) in cen.iter_mut().zip(p.iter()) {
                *c += v;
            }
        }
        for c in cen.iter_mut() {
            *c /= n as f64;
        }
        let at = |t: f64| -> Vec<f64> {
            cen.iter()
                .zip(pts[n].iter())
                .map(|(&c, &w)| c + t * (c - w))
                .collect()
        };

        let xr = at(1.0);
        let fr = f(&xr);
        if fr < fv[0] {
            let xe = at(2.0);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                fv[n] = fe;
            } else {
                pts[n] = xr;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            pts[n] = xr;
            fv[n] = fr;
        } else {
            let xc = at(if fr < fv[n] { 0.5 } else { -0.5 });
            let fc = f(&xc);
            if fc < fv[n].min(fr) {
                pts[n] = xc;
                fv[n] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    let best = pts[0].clone();
                    for (v, &b) in pts[i].iter_mut().zip(best.iter()) {
                        *v = b + 0.5 * (*v - b);
                    }
                    fv[i] = f(&pts[i]);
                }
            }
        }
    }
}
