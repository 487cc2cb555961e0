//! Quasi-Newton local search over the twelve unconstrained angles.

pub(crate) const N: usize = 12;

type Vector = [f64; N];
type Matrix = [[f64; N]; N];

/// Central-difference gradient.
pub(crate) fn central_gradient<F>(f: &F, x: &Vector, step: f64) -> Vector
where
    F: Fn(&Vector) -> f64,
{
    let mut g = [0.0; N];
    let mut probe = *x;
    for i in 0..N {
        let xi = x[i];
        probe[i] = xi + step;
        let up = f(&probe);
        probe[i] = xi - step;
        let down = f(&probe);
        probe[i] = xi;
        g[i] = (up - down) / (2.0 * step);
    }
    g
}

pub(crate) fn inf_norm(v: &Vector) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn dot(a: &Vector, b: &Vector) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(h: &Matrix, v: &Vector) -> Vector {
    std::array::from_fn(|i| dot(&h[i], v))
}

fn identity() -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalSettings {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalOutcome {
    pub x: Vector,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with BFGS directions and Armijo backtracking.
/// Falls back to steepest descent whenever the quasi-Newton direction is
/// not a descent direction or its line search stalls.
pub(crate) fn minimize<F>(f: &F, x0: Vector, settings: &LocalSettings) -> LocalOutcome
where
    F: Fn(&Vector) -> f64,
{
    const ARMIJO: f64 = 1e-4;
    const MIN_STEP: f64 = 1e-14;

    let mut x = x0;
    let mut fx = f(&x);
    let mut g = central_gradient(f, &x, settings.step);
    let mut h = identity();
    let mut h_is_identity = true;
    let mut iterations = 0;

    while iterations < settings.max_iterations {
        if inf_norm(&g) < settings.gradient_tolerance {
            break;
        }
        iterations += 1;

        let mut d = mat_vec(&h, &g).map(|v| -v);
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            h = identity();
            h_is_identity = true;
            d = g.map(|v| -v);
            slope = dot(&g, &d);
        }

        // rounding slack so tiny-but-real decreases near the optimum are accepted
        let slack = 4.0 * f64::EPSILON * fx.abs().max(1.0);
        let mut t = 1.0;
        let accepted = loop {
            let trial: Vector = std::array::from_fn(|i| x[i] + t * d[i]);
            let ft = f(&trial);
            if ft <= fx + ARMIJO * t * slope + slack {
                break Some((trial, ft));
            }
            t *= 0.5;
            if t < MIN_STEP {
                break None;
            }
        };

        let Some((x_new, f_new)) = accepted else {
            if h_is_identity {
                break;
            }
            h = identity();
            h_is_identity = true;
            continue;
        };

        let g_new = central_gradient(f, &x_new, settings.step);
        let s: Vector = std::array::from_fn(|i| x_new[i] - x[i]);
        let y: Vector = std::array::from_fn(|i| g_new[i] - g[i]);
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if h_is_identity {
                let scale = sy / dot(&y, &y);
                for (i, row) in h.iter_mut().enumerate() {
                    row[i] = scale;
                }
            }
            bfgs_update(&mut h, &s, &y, sy);
            h_is_identity = false;
        }

        x = x_new;
        fx = f_new;
        g = g_new;
    }

    let gradient_norm = inf_norm(&g);
    LocalOutcome {
        x,
        value: fx,
        gradient_norm,
        iterations,
        converged: gradient_norm < settings.gradient_tolerance,
    }
}

/// Inverse-Hessian update `H <- (I - r s y^T) H (I - r y s^T) + r s s^T`.
fn bfgs_update(h: &mut Matrix, s: &Vector, y: &Vector, sy: f64) {
    let r = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    for i in 0..N {
        for j in 0..N {
            h[i][j] += -r * (s[i] * hy[j] + hy[i] * s[j]) + (r * r * yhy + r) * s[i] * s[j];
        }
    }
}
