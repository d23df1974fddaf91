//! Closed forms for defects and chromatic numbers. Each returns `None`
//! outside the region where the closed form is claimed.

/// `⌈v / (r - 1)⌉` for any integer `v`.
pub fn bound_value(v: i64, r: usize) -> i64 {
    assert!(r >= 2, "bound_value needs r >= 2");
    let d = r as i64 - 1;
    -((-v).div_euclid(d))
}

/// `ecd^r(([n] choose k), s) = n - r(k - s - 1)` for `n >= r(k-1) + 1`, `0 <= s < k`.
pub fn formula_ecd_ksubsets(n: usize, k: usize, r: usize, s: usize) -> Option<i64> {
    let (n, k, r, s) = (n as i64, k as i64, r as i64, s as i64);
    (r >= 2 && k >= 1 && s < k && k <= n && n > r * (k - 1)).then(|| n - r * (k - s - 1))
}

/// `ecd^r(H(n, k, a, s), s)` by its three cases, for `k, r >= 2`, `n >= rk`,
/// `0 <= s < k` and `n > a + s`.
pub fn formula_ecd_h(n: usize, k: usize, r: usize, s: usize, a: usize) -> Option<i64> {
    let (n, k, r, s, a) = (n as i64, k as i64, r as i64, s as i64, a as i64);
    if k < 2 || r < 2 || n < r * k || s >= k || n <= a + s {
        return None;
    }
    Some(if a < k - s {
        n - r * (k - s - 1)
    } else if a <= r * (k - s) - 2 {
        n - r * (k - s - 1) - a / (k - s)
    } else {
        n - a
    })
}

/// `ecd^r` of the `t`-wide `k`-subsets: `n - r(k-1)` for `t <= k` and
/// `n - rt` for `t > k`, when `n > max(rt, r(k-1))`.
pub fn formula_ecd_twide(n: usize, k: usize, r: usize, t: usize) -> Option<i64> {
    let (n, k, r, t) = (n as i64, k as i64, r as i64, t as i64);
    if r < 2 || k < 1 || t < 1 || k > n || n <= (r * t).max(r * (k - 1)) {
        return None;
    }
    Some(if t <= k { n - r * (k - 1) } else { n - r * t })
}

/// Right-hand side of the `KG^r(n, k, a, s)` bound,
/// `⌈(n - r(k - ⌊s/2⌋ - 1)) / (r - 1)⌉`, under `k, r >= 2`, `n > a`,
/// `n >= rk`, `0 <= s < k` and `a <= r(k - s - 1)`.
pub fn h_family_bound(n: usize, k: usize, r: usize, s: usize, a: usize) -> Option<i64> {
    let (ni, ki, ri, si, ai) = (n as i64, k as i64, r as i64, s as i64, a as i64);
    if k < 2 || r < 2 || ni <= ai || ni < ri * ki || si >= ki || ai > ri * (ki - si - 1) {
        return None;
    }
    Some(bound_value(ni - ri * (ki - si / 2 - 1), r))
}

/// `χ(KG^r(n, k)_{t-wide}) = ⌈(n - r(k-1)) / (r-1)⌉` for `k >= 1`, `r >= 2`,
/// `n >= rk` and `t <= r(k-2) + 1`.
pub fn twide_chromatic(n: usize, k: usize, r: usize, t: usize) -> Option<i64> {
    let (ni, ki, ri, ti) = (n as i64, k as i64, r as i64, t as i64);
    if k < 1 || r < 2 || t < 1 || ni < ri * ki || ti > ri * (ki - 2) + 1 {
        return None;
    }
    Some(bound_value(ni - ri * (ki - 1), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceiling() {
        assert_eq!(bound_value(3, 2), 3);
        assert_eq!(bound_value(5, 3), 3);
        assert_eq!(bound_value(0, 2), 0);
        assert_eq!(bound_value(-1, 3), 0);
        assert_eq!(bound_value(-3, 3), -1);
        assert_eq!(bound_value(4, 3), 2);
        for v in -20i64..20 {
            for r in 2..6usize {
                let b = bound_value(v, r);
                let d = r as i64 - 1;
                assert!(b * d >= v && (b - 1) * d < v, "{v} {r}");
            }
        }
    }

    #[test]
    fn ksubsets_examples() {
        assert_eq!(formula_ecd_ksubsets(7, 3, 2, 0), Some(3));
        assert_eq!(formula_ecd_ksubsets(6, 2, 2, 1), Some(6));
        assert_eq!(formula_ecd_ksubsets(5, 2, 2, 0), Some(3));
        assert_eq!(formula_ecd_ksubsets(4, 3, 2, 0), None);
        assert_eq!(formula_ecd_ksubsets(7, 3, 2, 3), None);
    }

    #[test]
    fn h_examples() {
        assert_eq!(formula_ecd_h(8, 3, 2, 0, 2), Some(4));
        assert_eq!(formula_ecd_h(8, 3, 2, 0, 3), Some(3));
        assert_eq!(formula_ecd_h(8, 3, 2, 0, 5), Some(3));
        // boundaries between the cases: a = k-s-1, k-s, r(k-s)-2, r(k-s)-1
        assert_eq!(formula_ecd_h(9, 3, 2, 1, 1), Some(7));
        assert_eq!(formula_ecd_h(9, 3, 2, 1, 2), Some(6));
        assert_eq!(formula_ecd_h(9, 3, 2, 1, 3), Some(6));
        assert_eq!(formula_ecd_h(9, 3, 2, 1, 4), Some(5));
        assert_eq!(formula_ecd_h(5, 3, 2, 0, 1), None);
        assert_eq!(formula_ecd_h(8, 3, 2, 2, 6), None);
    }

    #[test]
    fn twide_examples() {
        assert_eq!(formula_ecd_twide(9, 3, 2, 3), Some(5));
        assert_eq!(formula_ecd_twide(9, 3, 2, 4), Some(1));
        assert_eq!(formula_ecd_twide(7, 2, 2, 3), Some(1));
        assert_eq!(formula_ecd_twide(8, 2, 2, 4), None);
    }

    #[test]
    fn theorem_sides() {
        assert_eq!(h_family_bound(8, 3, 2, 1, 2), Some(4));
        assert_eq!(h_family_bound(8, 3, 2, 1, 3), None);
        assert_eq!(twide_chromatic(7, 3, 2, 3), Some(3));
        assert_eq!(twide_chromatic(7, 3, 2, 4), None);
        assert_eq!(twide_chromatic(5, 2, 2, 1), Some(3));
    }
}
