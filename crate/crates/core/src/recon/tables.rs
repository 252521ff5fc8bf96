//! Precomputed stencil operators. Candidate polynomials match zone
//! averages over their stencils; the tables hold the resulting linear maps
//! from window values to edge values and the quadratic forms giving the
//! smoothness indicators
//!
//!   beta = sum_l int_zone (dx^(2l-1)) (d^l P / dx^l)^2 dx,
//!
//! evaluated exactly. For the three-point stencils this reproduces the
//! classical closed-form indicators; the same machinery extends them to
//! the large stencils of the adaptive-order scheme.

use crate::linalg::{invert, Mat};
use std::sync::OnceLock;

/// One candidate stencil: edge-value weights and the smoothness quadratic
/// form, all acting on the stencil's own point values.
pub struct StencilOp {
    /// Offset of the stencil's first value inside the parent window.
    pub start: usize,
    pub len: usize,
    pub wl: Vec<f64>,
    pub wr: Vec<f64>,
    /// Row-major len x len symmetric form.
    pub beta: Vec<f64>,
}

pub struct AoTables {
    pub order: usize,
    pub window: usize,
    pub tau_power: i32,
    pub gamma_hi: f64,
    pub gamma_lo: Vec<f64>,
    pub smalls: Vec<StencilOp>,
    pub big: StencilOp,
}

/// Zone-average -> monomial-coefficient map for one multiresolution level.
pub struct MrLevel {
    pub len: usize,
    /// (degree + 1) rows of length `len`, row-major.
    pub mono: Vec<f64>,
}

pub struct MrTables {
    pub order: usize,
    pub window: usize,
    pub levels: usize,
    pub tau_power: i32,
    pub gamma_bar: [f64; 5],
    /// Cumulative sums of gamma_bar, indexed by level - 1.
    pub gamma_cum: [f64; 5],
    /// Levels 2..=L.
    pub q: Vec<MrLevel>,
    /// 9x9 smoothness form on monomial coefficients.
    pub qform: Vec<f64>,
}

#[inline]
pub fn quad_form(b: &[f64], v: &[f64]) -> f64 {
    let n = v.len();
    debug_assert_eq!(b.len(), n * n);
    let mut s = 0.0;
    for i in 0..n {
        let vi = v[i];
        if vi == 0.0 {
            continue;
        }
        let row = &b[i * n..(i + 1) * n];
        let mut t = 0.0;
        for j in 0..n {
            t += row[j] * v[j];
        }
        s += vi * t;
    }
    s
}

fn order_index(order: usize) -> usize {
    match order {
        3 => 0,
        5 => 1,
        7 => 2,
        9 => 3,
        _ => panic!("unsupported reconstruction order {order} (use 3, 5, 7 or 9)"),
    }
}

pub fn ao_tables(order: usize) -> &'static AoTables {
    static TABLES: [OnceLock<AoTables>; 4] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[order_index(order)].get_or_init(|| build_ao(order))
}

pub fn mr_tables(order: usize) -> &'static MrTables {
    static TABLES: [OnceLock<MrTables>; 4] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[order_index(order)].get_or_init(|| build_mr(order))
}

fn tau_power_for(order: usize) -> i32 {
    // the power rises with the order so the nonlinear weights keep the
    // design accuracy: tau^2 at fifth order, tau^3 at seventh, tau^4 at
    // ninth; third order shares the fifth-order exponent
    match order {
        3 | 5 => 2,
        7 => 3,
        9 => 4,
        _ => unreachable!(),
    }
}

fn build_ao(order: usize) -> AoTables {
    let w = order / 2;
    let (smalls, gamma_lo): (Vec<StencilOp>, Vec<f64>) = if order == 3 {
        (
            vec![build_stencil(-1, 0, w as i64), build_stencil(0, 1, w as i64)],
            vec![0.075, 0.075],
        )
    } else {
        let lo = 0.15;
        (
            vec![
                build_stencil(-2, 0, w as i64),
                build_stencil(-1, 1, w as i64),
                build_stencil(0, 2, w as i64),
            ],
            vec![lo * 0.075, lo * 0.85, lo * 0.075],
        )
    };
    AoTables {
        order,
        window: order,
        tau_power: tau_power_for(order),
        gamma_hi: 0.85,
        gamma_lo,
        smalls,
        big: build_stencil(-(w as i64), w as i64, w as i64),
    }
}

fn build_mr(order: usize) -> MrTables {
    let levels = order / 2 + 1;
    let w = order / 2;
    let mut gamma_bar = [0.0; 5];
    let mut gamma_cum = [0.0; 5];
    let mut acc = 0.0;
    for l in 0..levels {
        gamma_bar[l] = 10f64.powi(l as i32);
        acc += gamma_bar[l];
        gamma_cum[l] = acc;
    }
    let mut q = Vec::new();
    for m in 2..=levels {
        let half = (m - 1) as i64;
        let (mono, len) = mono_map(-half, half);
        q.push(MrLevel { len, mono });
    }
    MrTables {
        order,
        window: order,
        levels,
        tau_power: tau_power_for(order),
        gamma_bar,
        gamma_cum,
        q,
        qform: smoothness_form_mono(9),
        // w is the center index of the window; kept implicit (window/2)
    }
    .validate(w)
}

impl MrTables {
    fn validate(self, w: usize) -> Self {
        assert_eq!(self.window / 2, w);
        self
    }
}

/// Monomial coefficients of the Legendre polynomials P_k(x/s) up to
/// degree `deg`; row k holds the coefficients of P_k.
fn scaled_legendre(deg: usize, s: f64) -> Vec<Vec<f64>> {
    let mut p: Vec<Vec<f64>> = vec![vec![0.0; deg + 1]; deg + 1];
    p[0][0] = 1.0;
    if deg >= 1 {
        p[1][1] = 1.0;
    }
    for k in 1..deg {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        let (a, b) = ((2 * k + 1) as f64 / (k + 1) as f64, k as f64 / (k + 1) as f64);
        let mut next = vec![0.0; deg + 1];
        for n in 0..=k {
            next[n + 1] += a * p[k][n];
        }
        for n in 0..=k.saturating_sub(1) {
            next[n] -= b * p[k - 1][n];
        }
        p[k + 1] = next;
    }
    // substitute x -> xi / s
    for row in p.iter_mut() {
        let mut f = 1.0;
        for (n, c) in row.iter_mut().enumerate() {
            if n > 0 {
                f /= s;
            }
            *c *= f;
        }
    }
    p
}

fn integral_monomial(a: f64, b: f64, n: usize) -> f64 {
    (b.powi(n as i32 + 1) - a.powi(n as i32 + 1)) / (n as f64 + 1.0)
}

/// Zone-average -> monomial-coefficient matrix for the stencil covering
/// offsets lo..=hi, returned row-major with degree+1 rows.
fn mono_map(lo: i64, hi: i64) -> (Vec<f64>, usize) {
    let len = (hi - lo + 1) as usize;
    let deg = len - 1;
    let s = (lo.abs().max(hi.abs()) as f64) + 0.5;
    let leg = scaled_legendre(deg, s);
    // V[j][k] = average of basis k over zone at offset j
    let mut v = Mat::zeros(len);
    for (j, off) in (lo..=hi).enumerate() {
        for k in 0..len {
            let mut avg = 0.0;
            for (n, c) in leg[k].iter().enumerate() {
                if *c != 0.0 {
                    avg += c * integral_monomial(off as f64 - 0.5, off as f64 + 0.5, n);
                }
            }
            v[(j, k)] = avg;
        }
    }
    let vinv = invert(&v).expect("stencil average-matching system is nonsingular");
    // mono[n][j] = sum_k leg[k][n] * vinv[k][j]
    let mut mono = vec![0.0; len * len];
    for n in 0..=deg {
        for j in 0..len {
            let mut c = 0.0;
            for k in 0..len {
                c += leg[k][n] * vinv[(k, j)];
            }
            mono[n * len + j] = c;
        }
    }
    (mono, len)
}

/// Smoothness quadratic form on monomial coefficients up to `ncoef`
/// coefficients: Q[n][m] = sum_{l>=1} (n)_l (m)_l int_{-1/2}^{1/2}
/// xi^{n+m-2l} dxi with falling factorials (n)_l = n!/(n-l)!.
fn smoothness_form_mono(ncoef: usize) -> Vec<f64> {
    let falling = |n: usize, l: usize| -> f64 {
        let mut f = 1.0;
        for k in 0..l {
            f *= (n - k) as f64;
        }
        f
    };
    let icent = |p: usize| -> f64 {
        if p % 2 == 1 {
            0.0
        } else {
            (0.5f64).powi(p as i32) / (p as f64 + 1.0)
        }
    };
    let mut q = vec![0.0; ncoef * ncoef];
    for n in 0..ncoef {
        for m in 0..ncoef {
            let mut s = 0.0;
            for l in 1..=n.min(m) {
                s += falling(n, l) * falling(m, l) * icent(n + m - 2 * l);
            }
            q[n * ncoef + m] = s;
        }
    }
    q
}

/// Build the full operator for the stencil lo..=hi inside a window whose
/// center zone sits at index `center`.
fn build_stencil(lo: i64, hi: i64, center: i64) -> StencilOp {
    let (mono, len) = mono_map(lo, hi);
    let deg = len - 1;
    let eval = |x: f64| -> Vec<f64> {
        let mut wv = vec![0.0; len];
        for j in 0..len {
            let mut acc = 0.0;
            let mut xp = 1.0;
            for n in 0..=deg {
                acc += mono[n * len + j] * xp;
                xp *= x;
            }
            wv[j] = acc;
        }
        wv
    };
    let qf = smoothness_form_mono(len);
    let mut beta = vec![0.0; len * len];
    for j1 in 0..len {
        for j2 in 0..len {
            let mut s = 0.0;
            for n in 0..len {
                for m in 0..len {
                    s += mono[n * len + j1] * qf[n * len + m] * mono[m * len + j2];
                }
            }
            beta[j1 * len + j2] = s;
        }
    }
    StencilOp {
        start: (lo + center) as usize,
        len,
        wl: eval(-0.5),
        wr: eval(0.5),
        beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_three_point_edge_weights() {
        // central quadratic stencil: right edge (-1, 5, 2)/6, left edge (2, 5, -1)/6
        let s = build_stencil(-1, 1, 1);
        let want_r = [-1.0 / 6.0, 5.0 / 6.0, 2.0 / 6.0];
        let want_l = [2.0 / 6.0, 5.0 / 6.0, -1.0 / 6.0];
        for j in 0..3 {
            assert!((s.wr[j] - want_r[j]).abs() < 1e-13, "wr[{j}] = {}", s.wr[j]);
            assert!((s.wl[j] - want_l[j]).abs() < 1e-13);
        }
        // left-biased stencil right edge: (2, -7, 11)/6
        let sl = build_stencil(-2, 0, 2);
        let want = [2.0 / 6.0, -7.0 / 6.0, 11.0 / 6.0];
        for j in 0..3 {
            assert!((sl.wr[j] - want[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn classic_smoothness_indicators() {
        // beta for the central 3-point stencil must match the closed form
        // 13/12 (a - 2b + c)^2 + 1/4 (a - c)^2
        let s = build_stencil(-1, 1, 1);
        let cases: [[f64; 3]; 4] = [[1.0, 2.0, 4.0], [0.3, -0.2, 0.9], [2.0, 2.0, 2.0], [0.0, 1.0, 0.0]];
        for v in cases {
            let closed = 13.0 / 12.0 * (v[0] - 2.0 * v[1] + v[2]).powi(2) + 0.25 * (v[0] - v[2]).powi(2);
            let got = quad_form(&s.beta, &v);
            assert!((got - closed).abs() < 1e-12 * (1.0 + closed), "{got} vs {closed}");
        }
        // biased stencils against the Jiang-Shu forms
        let sl = build_stencil(-2, 0, 2);
        let v: [f64; 3] = [0.7, -0.4, 1.3];
        let closed = 13.0 / 12.0 * (v[0] - 2.0 * v[1] + v[2]).powi(2)
            + 0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]).powi(2);
        assert!((quad_form(&sl.beta, &v) - closed).abs() < 1e-12 * (1.0 + closed));
    }

    #[test]
    fn beta_matches_numerical_quadrature() {
        // cross-check the assembled quadratic form against direct
        // integration of the squared derivatives of the fitted polynomial
        for (lo, hi) in [(-2i64, 2i64), (-3, 3), (-4, 4)] {
            let (mono, len) = mono_map(lo, hi);
            let vals: Vec<f64> = (0..len).map(|k| ((k * k + 1) as f64 * 0.37).sin()).collect();
            let mut coeffs = vec![0.0; len];
            for n in 0..len {
                for j in 0..len {
                    coeffs[n] += mono[n * len + j] * vals[j];
                }
            }
            // direct: sum_l int (P^(l))^2 over the center zone with 64-pt
            // Gauss-Legendre via simple high-res midpoint rule
            let nq = 20000;
            let mut direct = 0.0;
            for l in 1..len {
                let mut dcoef = coeffs.clone();
                for _ in 0..l {
                    let mut next = vec![0.0; len];
                    for n in 1..len {
                        next[n - 1] = dcoef[n] * n as f64;
                    }
                    dcoef = next;
                }
                let mut acc = 0.0;
                for q in 0..nq {
                    let x = -0.5 + (q as f64 + 0.5) / nq as f64;
                    let mut p = 0.0;
                    let mut xp = 1.0;
                    for c in dcoef.iter() {
                        p += c * xp;
                        xp *= x;
                    }
                    acc += p * p;
                }
                direct += acc / nq as f64;
            }
            let sten = build_stencil(lo, hi, hi);
            let form = quad_form(&sten.beta, &vals);
            assert!(
                (form - direct).abs() < 1e-7 * (1.0 + direct.abs()),
                "({lo},{hi}): {form} vs {direct}"
            );
        }
    }

    #[test]
    fn polynomial_exactness_of_big_stencils() {
        // degree p-1 data is reproduced exactly at both edges
        for order in [5usize, 7, 9] {
            let w = (order / 2) as i64;
            let s = build_stencil(-w, w, w);
            // point "averages" of a polynomial of degree order-1: use the
            // exact zone averages of x^d so matching is consistent
            let d = order - 1;
            let avgs: Vec<f64> = (-w..=w)
                .map(|o| integral_monomial(o as f64 - 0.5, o as f64 + 0.5, d))
                .collect();
            let got_r: f64 = s.wr.iter().zip(avgs.iter()).map(|(a, b)| a * b).sum();
            let got_l: f64 = s.wl.iter().zip(avgs.iter()).map(|(a, b)| a * b).sum();
            let want_r = (0.5f64).powi(d as i32);
            let want_l = (-0.5f64).powi(d as i32);
            assert!((got_r - want_r).abs() < 1e-11, "order {order}: {got_r} vs {want_r}");
            assert!((got_l - want_l).abs() < 1e-11);
        }
    }
}
