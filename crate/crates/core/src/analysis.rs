//! Branching-recurrence calculus: factors, the cover order, combination.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{usage, Error, Result};

/// `C(n) <= sum_i C(n - a_i)`, stored as the decrements `a_i` in the order
/// given.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Recurrence(Vec<u32>);

impl Recurrence {
    pub fn new(decrements: Vec<u32>) -> Result<Self> {
        if decrements.is_empty() {
            return usage("a recurrence needs at least one branch");
        }
        if decrements.contains(&0) {
            return usage("decrements must be positive");
        }
        Ok(Recurrence(decrements))
    }

    pub fn decrements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Decrements in descending order, the canonical multiset form.
    pub fn sorted(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }
}

impl FromStr for Recurrence {
    type Err = Error;

    /// Parses `16,12,10,6`; braces and spaces are tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let parts: std::result::Result<Vec<u32>, _> =
            body.split(',').map(|t| t.trim().parse::<u32>()).collect();
        match parts {
            Ok(v) => Recurrence::new(v),
            Err(_) => usage(format!("cannot read decrements from {s:?}")),
        }
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Residual bound met by [`branching_factor`].
pub const FACTOR_TOLERANCE: f64 = 1e-9;

fn residual(decrements: &[u32], x: f64) -> f64 {
    decrements.iter().map(|&a| x.powi(-(a as i32))).sum::<f64>() - 1.0
}

/// The root `x >= 1` of `sum_i x^(-a_i) = 1`; a single branch gives 1.
pub fn branching_factor(r: &Recurrence) -> f64 {
    let a = r.decrements();
    if a.len() == 1 {
        return 1.0;
    }
    let min = *a.iter().min().unwrap() as f64;
    // residual is decreasing in x: positive at 1, non-positive at t^(1/min)
    let (mut lo, mut hi) = (1.0f64, (a.len() as f64).powf(1.0 / min));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(a, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    // Newton polish; the bracket keeps it honest
    for _ in 0..4 {
        let f = residual(a, x);
        let df: f64 = a
            .iter()
            .map(|&ai| -(ai as f64) * x.powi(-(ai as i32) - 1))
            .sum();
        let next = x - f / df;
        if next.is_finite() && (lo..=hi).contains(&next) {
            x = next;
        }
    }
    x
}

/// Direct cover step: `a` and `b` agree except at two positions where `a`
/// has `p >= q`, `b` has `r >= s`, with `r >= p`, `q >= s` and
/// `p + q >= r + s`. Equal multisets also count.
pub fn covered_directly(a: &Recurrence, b: &Recurrence) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (sa, sb) = (a.sorted(), b.sorted());
    if sa == sb {
        return true;
    }
    let t = sa.len();
    for i1 in 0..t {
        for i2 in 0..t {
            if i1 == i2 || sa[i1] < sa[i2] {
                continue;
            }
            for j1 in 0..t {
                for j2 in 0..t {
                    if j1 == j2 {
                        continue;
                    }
                    let (p, q, r, s) = (sa[i1], sa[i2], sb[j1], sb[j2]);
                    if !(r >= p && p >= q && q >= s && p + q >= r + s) {
                        continue;
                    }
                    if rest(&sa, i1, i2) == rest(&sb, j1, j2) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn rest(v: &[u32], i: usize, j: usize) -> Vec<u32> {
    let mut out: Vec<u32> = v
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, &x)| x)
        .collect();
    out.sort_unstable();
    out
}

/// Longest cover chain [`covers`] searches for.
pub const MAX_CHAIN: usize = 8;

/// Whether `a` is covered by `b`: a chain of at most [`MAX_CHAIN`] direct
/// steps leads from `a` to `b`. Only same-length recurrences are compared;
/// `false` means no short chain exists, not that none does.
pub fn covers(a: &Recurrence, b: &Recurrence) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if covered_directly(a, b) {
        return true;
    }
    let target = b.sorted();
    let (lo, hi) = (*target.last().unwrap(), target[0]);
    let (sum_lo, sum_hi) = (b.sum(), a.sum());
    if sum_hi < sum_lo {
        return false;
    }
    let start = a.sorted();
    if start.iter().any(|&x| x < lo || x > hi) {
        return false;
    }
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((x, depth)) = queue.pop_front() {
        if depth == MAX_CHAIN {
            continue;
        }
        let x_sum: u64 = x.iter().map(|&v| v as u64).sum();
        for i1 in 0..x.len() {
            for i2 in 0..x.len() {
                if i1 == i2 || x[i1] < x[i2] {
                    continue;
                }
                let (p, q) = (x[i1], x[i2]);
                let others = x_sum - p as u64 - q as u64;
                for r in p..=hi {
                    for s in lo..=q {
                        let pair = r as u64 + s as u64;
                        if pair > p as u64 + q as u64 || others + pair < sum_lo {
                            continue;
                        }
                        let mut y = x.clone();
                        y[i1] = r;
                        y[i2] = s;
                        y.sort_unstable_by(|a, b| b.cmp(a));
                        if y == target {
                            return true;
                        }
                        if seen.insert(y.clone()) {
                            queue.push_back((y, depth + 1));
                        }
                    }
                }
            }
        }
    }
    false
}

/// Branching by `x`, then by `y` in the branch that removed `first`
/// (default: the smallest decrement of `x`).
pub fn combine(x: &Recurrence, y: &Recurrence, first: Option<u32>) -> Result<Recurrence> {
    let first = first.unwrap_or_else(|| *x.decrements().iter().min().unwrap());
    let Some(pos) = x.decrements().iter().position(|&a| a == first) else {
        return usage(format!("{first} is not a decrement of {x}"));
    };
    let mut out: Vec<u32> = y.decrements().iter().map(|&b| first + b).collect();
    out.extend(
        x.decrements()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &a)| a),
    );
    Recurrence::new(out)
}

/// The recurrence with the largest branching factor.
pub fn worst_factor(rs: &[Recurrence]) -> Result<(Recurrence, f64)> {
    rs.iter()
        .map(|r| (r.clone(), branching_factor(r)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Usage("no recurrences given".into()))
}

const FIXTURE: &str = include_str!("../fixtures/recurrences.txt");

/// Every recurrence of the algorithm's running-time analysis, by name.
pub fn algorithm_recurrences() -> Vec<(String, Recurrence)> {
    parse_recurrence_list(FIXTURE).expect("shipped fixture parses")
}

/// Reads `<name> <decrements>` lines; `#` starts a comment line.
pub fn parse_recurrence_list(text: &str) -> Result<Vec<(String, Recurrence)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((name, body)) = line.split_once(char::is_whitespace) else {
            return Err(Error::Parse {
                line: i + 1,
                msg: "expected `<name> <decrements>`".into(),
            });
        };
        out.push((name.to_string(), body.parse()?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: &str) -> Recurrence {
        s.parse().unwrap()
    }

    #[test]
    fn reported_factors() {
        assert!((branching_factor(&rec("2,8")) - 1.1749).abs() < 1e-4);
        assert!((branching_factor(&rec("16,12,10,6")) - 1.1467).abs() < 1e-4);
        assert_eq!(branching_factor(&rec("1,1")), 2.0);
        assert_eq!(branching_factor(&rec("5")), 1.0);
        assert!(residual(&[16, 12, 10, 6], branching_factor(&rec("16,12,10,6"))).abs() < 1e-9);
    }

    #[test]
    fn cover_examples() {
        assert!(covers(&rec("6,6"), &rec("8,4")));
        assert!(covers(&rec("3,9"), &rec("3,9")));
        assert!(!covers(&rec("8,4"), &rec("6,6")));
        assert!(!covers(&rec("4,4"), &rec("4,4,4")));
    }

    #[test]
    fn cover_through_a_chain() {
        // e.g. {6,6,6} -> {7,6,5} -> {8,5,5} -> {8,5,3}
        let a = rec("6,6,6");
        let b = rec("8,5,3");
        assert!(!covered_directly(&a, &b));
        assert!(covers(&a, &b));
    }

    #[test]
    fn combination() {
        assert_eq!(
            combine(&rec("2,8"), &rec("8,4"), Some(2)).unwrap(),
            rec("10,6,8")
        );
        assert_eq!(combine(&rec("7"), &rec("5"), None).unwrap(), rec("12"));
        assert!(combine(&rec("2,8"), &rec("8,4"), Some(3)).is_err());
    }

    #[test]
    fn fixture_worst_case() {
        let rs: Vec<Recurrence> = algorithm_recurrences()
            .into_iter()
            .map(|(_, r)| r)
            .collect();
        assert_eq!(rs.len(), 22);
        let (worst, f) = worst_factor(&rs).unwrap();
        assert_eq!(worst, rec("16,12,10,6"));
        assert!((f - 1.1467).abs() < 1e-4);
        assert!(worst_factor(&[]).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(rec("{16, 12,10,6}").decrements(), &[16, 12, 10, 6]);
        assert!("".parse::<Recurrence>().is_err());
        assert!("3,0".parse::<Recurrence>().is_err());
    }
}
