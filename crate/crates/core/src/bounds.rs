//! Closed-form degree and edge thresholds for `K2(s)`/`K3(s)` problems.
//!
//! Real powers are evaluated in double precision. Comparisons whose two sides
//! agree to a relative tolerance of [`REL_TOL`] are reported as
//! [`Comparison::Indeterminate`] instead of being forced to a boolean.
//!
//! The upper threshold only applies for "sufficiently large" `n`, which is
//! not quantified; [`eqb_compare`] and [`min_n_for_eqb`] expose the single step
//! of the argument that can be checked numerically.

use serde::Serialize;

use crate::error::{Error, Result};

pub const REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Above,
    Below,
    Indeterminate,
}

impl Comparison {
    /// `lhs` vs `rhs` with relative tolerance [`REL_TOL`].
    pub fn of(lhs: f64, rhs: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        if (lhs - rhs).abs() <= REL_TOL * scale {
            Comparison::Indeterminate
        } else if lhs > rhs {
            Comparison::Above
        } else {
            Comparison::Below
        }
    }
}

fn check_s(s: u64) -> Result<()> {
    if s < 2 {
        return Err(Error::BadArgs(format!("s must be at least 2, got {s}")));
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n < 1 {
        return Err(Error::BadArgs("n must be at least 1".into()));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::BadArgs(format!("eps must be finite and nonnegative, got {eps}")));
    }
    Ok(())
}

/// Kővári–Sós–Turán upper bound on the Zarankiewicz number `z(n, s)`:
/// `(s-1)^(1/s) (n-s+1) n^(1-1/s) + (s-1) n`.
pub fn kst_bound(n: u64, s: u64) -> Result<f64> {
    check_s(s)?;
    if n < s {
        return Err(Error::BadArgs(format!("need n >= s, got n={n}, s={s}")));
    }
    let (nf, sf) = (n as f64, s as f64);
    Ok((sf - 1.0).powf(1.0 / sf) * (nf - sf + 1.0) * nf.powf(1.0 - 1.0 / sf) + (sf - 1.0) * nf)
}

/// Excess `t = (1+eps) (s-1)^(1/(3s^2)) n^(1-1/(3s^2))` over `n`.
pub fn t_value(n: u64, s: u64, eps: f64) -> Result<f64> {
    check_n(n)?;
    check_s(s)?;
    check_eps(eps)?;
    let (nf, sf) = (n as f64, s as f64);
    let e = 1.0 / (3.0 * sf * sf);
    Ok((1.0 + eps) * (sf - 1.0).powf(e) * nf.powf(1.0 - e))
}

/// Minimum degree `n + t(n, s, eps)` that forces `K3(s)` for large `n`.
pub fn thm_threshold(n: u64, s: u64, eps: f64) -> Result<f64> {
    Ok(n as f64 + t_value(n, s, eps)?)
}

/// The weaker hypergraph-route threshold `n + (3n)^(1-1/(3s^2))`.
pub fn prop2_threshold(n: u64, s: u64) -> Result<f64> {
    check_n(n)?;
    check_s(s)?;
    let sf = s as f64;
    Ok(n as f64 + (3.0 * n as f64).powf(1.0 - 1.0 / (3.0 * sf * sf)))
}

/// Edge count `n^(r - s^(1-r))` forcing `K^r_r(s)` in an `r`-graph on `n` vertices.
pub fn erdos_edge_threshold(n_vertices: u64, r: u64, s: u64) -> Result<f64> {
    check_n(n_vertices)?;
    if r < 2 || s < 2 {
        return Err(Error::BadArgs(format!("need r, s >= 2, got r={r}, s={s}")));
    }
    let exp = r as f64 - (s as f64).powf(1.0 - r as f64);
    Ok((n_vertices as f64).powf(exp))
}

/// `n + sqrt(n)`, the minimum degree of the projective-plane constructions.
pub fn lower_bound(n: u64) -> f64 {
    n as f64 + (n as f64).sqrt()
}

/// Guaranteed intersection size `n^2 (t^3 / ((1+eps) n^3))^s` at the degree threshold.
pub fn eqb_lhs_floor(n: u64, s: u64, eps: f64) -> Result<f64> {
    let t = t_value(n, s, eps)?;
    let nf = n as f64;
    Ok(nf * nf * (t.powi(3) / ((1.0 + eps) * nf.powi(3))).powi(s as i32))
}

/// Compares `(1+eps)^s (s-1)^(1/s) n^(2-1/s)` against `(s-1)^(1/s) n^(2-1/s) + (s-1) n`.
pub fn eqb_compare(n: u64, s: u64, eps: f64) -> Result<Comparison> {
    check_n(n)?;
    check_s(s)?;
    check_eps(eps)?;
    let (nf, sf) = (n as f64, s as f64);
    let base = (sf - 1.0).powf(1.0 / sf) * nf.powf(2.0 - 1.0 / sf);
    let lhs = (1.0 + eps).powi(s as i32) * base;
    let rhs = base + (sf - 1.0) * nf;
    Ok(Comparison::of(lhs, rhs))
}

/// Whether the final counting step closes at `(n, s, eps)`. Near-ties count as failure.
pub fn eqb_check(n: u64, s: u64, eps: f64) -> bool {
    matches!(eqb_compare(n, s, eps), Ok(Comparison::Above))
}

/// Smallest `n >= 1` with [`eqb_check`] true, by binary search (the slack is
/// increasing in `n`).
pub fn min_n_for_eqb(s: u64, eps: f64) -> Result<u64> {
    check_s(s)?;
    check_eps(eps)?;
    if eps == 0.0 {
        return Err(Error::BadArgs("eps must be positive".into()));
    }
    if eqb_check(1, s, eps) {
        return Ok(1);
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    while !eqb_check(hi, s, eps) {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .filter(|&h| h < 1 << 53)
            .ok_or_else(|| Error::TooLarge { what: format!("minimal n for s={s}, eps={eps}") })?;
    }
    // invariant: check(lo) false, check(hi) true
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eqb_check(mid, s, eps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub n: u64,
    pub s: u64,
    pub eps: f64,
    /// Absent when `n < s`, where the formula does not apply.
    pub kst: Option<f64>,
    pub thm_threshold: f64,
    pub prop2_threshold: f64,
    /// Edge threshold for the 3-graph of triangles on `3n` vertices.
    pub erdos_edges: f64,
    pub lower_bound: f64,
    pub t_value: f64,
    pub eqb_lhs_floor: f64,
}

pub const CSV_HEADER: &str = "n,s,eps,lower,thm,prop2,kst,erdos";

impl ThresholdReport {
    pub fn new(n: u64, s: u64, eps: f64) -> Result<Self> {
        Ok(ThresholdReport {
            n,
            s,
            eps,
            kst: if n >= s { Some(kst_bound(n, s)?) } else { None },
            thm_threshold: thm_threshold(n, s, eps)?,
            prop2_threshold: prop2_threshold(n, s)?,
            erdos_edges: erdos_edge_threshold(3 * n, 3, s)?,
            lower_bound: lower_bound(n),
            t_value: t_value(n, s, eps)?,
            eqb_lhs_floor: eqb_lhs_floor(n, s, eps)?,
        })
    }

    pub fn csv_row(&self) -> String {
        let kst = self.kst.map(|k| k.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.s, self.eps, self.lower_bound, self.thm_threshold, self.prop2_threshold, kst, self.erdos_edges
        )
    }
}

/// Header plus one row per `n` in `n_from..=n_to`.
pub fn threshold_csv(s: u64, eps: f64, n_from: u64, n_to: u64) -> Result<String> {
    if n_from > n_to {
        return Err(Error::BadArgs(format!("empty range {n_from}..={n_to}")));
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for n in n_from..=n_to {
        out.push_str(&ThresholdReport::new(n, s, eps)?.csv_row());
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn kst_examples() {
        let v = kst_bound(7, 2).unwrap();
        assert!(close(v, 6.0 * 7f64.sqrt() + 7.0, 1e-14));
        assert!((v - 22.8745).abs() < 1e-4);
        assert!(v > 21.0);
        assert!((kst_bound(2, 2).unwrap() - 3.4142).abs() < 1e-4);
        for s in 2..8u64 {
            let sf = s as f64;
            let expect = (sf - 1.0).powf(1.0 / sf) * sf.powf(1.0 - 1.0 / sf) + (sf - 1.0) * sf;
            assert!(close(kst_bound(s, s).unwrap(), expect, 1e-14));
        }
        assert!(matches!(kst_bound(1, 2), Err(Error::BadArgs(_))));
        assert!(matches!(kst_bound(5, 1), Err(Error::BadArgs(_))));
    }

    #[test]
    fn theorem_threshold_examples() {
        for n in [1u64, 10, 1000, 123_456] {
            let expect = n as f64 + (n as f64).powf(11.0 / 12.0);
            assert!(close(thm_threshold(n, 2, 0.0).unwrap(), expect, 1e-14));
        }
        let n = 1_000_000u64;
        let expect = n as f64 + 2f64.powf(1.0 / 27.0) * (n as f64).powf(26.0 / 27.0);
        assert!(close(thm_threshold(n, 3, 0.0).unwrap(), expect, 1e-14));
        let eps = 0.3;
        let expect = 1.0 + (1.0 + eps) * 2f64.powf(1.0 / 27.0);
        assert!(close(thm_threshold(1, 3, eps).unwrap(), expect, 1e-14));
        assert!(thm_threshold(10, 2, -0.1).is_err());
        assert!(thm_threshold(0, 2, 0.1).is_err());
    }

    #[test]
    fn prop2_examples() {
        assert!(close(prop2_threshold(1, 2).unwrap(), 1.0 + 3f64.powf(11.0 / 12.0), 1e-14));
        assert!(close(prop2_threshold(50, 2).unwrap(), 50.0 + 150f64.powf(11.0 / 12.0), 1e-14));
        for n in 10..=1_000_000u64 {
            if n % 997 == 0 || n < 2000 {
                assert!(prop2_threshold(n, 2).unwrap() > thm_threshold(n, 2, 0.0).unwrap());
            }
        }
    }

    #[test]
    fn erdos_examples() {
        assert!(close(erdos_edge_threshold(10, 3, 2).unwrap(), 10f64.powf(2.75), 1e-14));
        assert!(close(erdos_edge_threshold(10, 2, 2).unwrap(), 10f64.powf(1.5), 1e-14));
        assert_eq!(erdos_edge_threshold(1, 3, 2).unwrap(), 1.0);
        // with 3n vertices it matches the (3n)^(3 - 1/s^2) triangle count
        let n = 40u64;
        assert!(close(erdos_edge_threshold(3 * n, 3, 2).unwrap(), (3.0 * n as f64).powf(3.0 - 0.25), 1e-14));
        assert!(erdos_edge_threshold(5, 1, 2).is_err());
    }

    #[test]
    fn eqb_examples() {
        assert!(eqb_check(100, 2, 1.0));
        assert!(!eqb_check(10, 2, 1e-6));
        assert_eq!(eqb_compare(10, 2, 0.0).unwrap(), Comparison::Below);
        assert_eq!(min_n_for_eqb(2, 1.0).unwrap(), 1);
    }

    #[test]
    fn min_n_matches_closed_form() {
        // slack > 0 iff n^(1-1/s) > (s-1) / (((1+eps)^s - 1) (s-1)^(1/s))
        for s in 2..=5u64 {
            for eps in [0.001f64, 0.01, 0.05, 0.2, 1.0] {
                let sf = s as f64;
                let a = ((1.0 + eps).powi(s as i32) - 1.0) * (sf - 1.0).powf(1.0 / sf);
                let star = ((sf - 1.0) / a).powf(sf / (sf - 1.0));
                let got = min_n_for_eqb(s, eps).unwrap();
                assert!(eqb_check(got, s, eps));
                if got > 1 {
                    assert!(!eqb_check(got - 1, s, eps));
                }
                assert!((got as f64 - star).abs() <= 1.0 + 1e-9 * star, "s={s} eps={eps} got={got} star={star}");
            }
        }
    }

    #[test]
    fn eqb_lhs_floor_dominates_eqb_left_side() {
        // floor = (1+eps)^(2s) (s-1)^(1/s) n^(2-1/s)
        for (n, s, eps) in [(100u64, 2u64, 0.5f64), (1000, 3, 0.1), (50, 2, 1.0)] {
            let (nf, sf) = (n as f64, s as f64);
            let expect = (1.0 + eps).powi(2 * s as i32) * (sf - 1.0).powf(1.0 / sf) * nf.powf(2.0 - 1.0 / sf);
            assert!(close(eqb_lhs_floor(n, s, eps).unwrap(), expect, 1e-12));
        }
    }

    #[test]
    fn ordering_and_monotonicity() {
        let mut prev: Option<ThresholdReport> = None;
        for n in 2..3000u64 {
            for eps in [0.0, 0.05, 0.1] {
                let thm = thm_threshold(n, 2, eps).unwrap();
                assert!(lower_bound(n) < thm && thm < prop2_threshold(n, 2).unwrap(), "n={n}");
            }
            let r = ThresholdReport::new(n, 2, 0.1).unwrap();
            if let Some(p) = prev {
                assert!(r.lower_bound >= p.lower_bound);
                assert!(r.thm_threshold >= p.thm_threshold);
                assert!(r.prop2_threshold >= p.prop2_threshold);
                assert!(r.kst >= p.kst);
                assert!(r.erdos_edges >= p.erdos_edges);
            }
            prev = Some(r);
        }
    }

    #[test]
    fn report_values_are_finite() {
        for n in 1..50u64 {
            for s in 2..6u64 {
                let r = ThresholdReport::new(n, s, 0.5).unwrap();
                for v in [r.thm_threshold, r.prop2_threshold, r.erdos_edges, r.lower_bound, r.t_value, r.eqb_lhs_floor]
                    .into_iter()
                    .chain(r.kst)
                {
                    assert!(v.is_finite() && v >= 0.0);
                }
                assert_eq!(r.kst.is_some(), n >= s);
            }
        }
    }

    #[test]
    fn csv_shape() {
        let csv = threshold_csv(2, 0.0, 10, 100).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 92);
        assert!(lines[1].starts_with("10,2,0,"));
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 8));
    }

    #[test]
    fn comparison_tolerance() {
        assert_eq!(Comparison::of(1.0, 1.0 + 1e-15), Comparison::Indeterminate);
        assert_eq!(Comparison::of(3.0, 7f64.sqrt()), Comparison::Above);
        assert_eq!(Comparison::of(-3.0, 7f64.sqrt()), Comparison::Below);
    }
}
