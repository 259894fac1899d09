//! `D*(m, k)`: the minimum of `m - q_S + dim W_S` over `k`-subsets `S` of the
//! cycle `Z_m`.
//!
//! `q_S` is the least positive rotation fixing `S`. `W_S` is spanned by the
//! rotations of `gamma_S = chi_S - (k/m) 1`; scaled by `m` it is the integer
//! vector with coefficients `m chi_S(i) - k`. Its span is a circulant space of
//! dimension `m - deg gcd(x^m - 1, c(x))`, and since `x^m - 1` is the
//! squarefree product of the cyclotomic polynomials `Phi_d`, `d | m`, the gcd
//! degree is the sum of `phi(d)` over the `Phi_d` that divide `c(x)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest cycle length for which tables are computed.
pub const MAX_M: usize = 20;

/// A polynomial with integer coefficients, lowest degree first.
type Poly = Vec<i64>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

/// Remainder of `a` divided by the monic polynomial `b`.
fn rem_monic(a: &[i64], b: &[i64]) -> Poly {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] -= lead * c;
            }
        }
        r.pop();
    }
    trim(r)
}

/// Exact quotient of `a` by the monic polynomial `b`.
fn div_monic(a: &[i64], b: &[i64]) -> Poly {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0; a.len() - db];
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        q[shift] = lead;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] -= lead * c;
        }
        r.pop();
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// `Phi_d` for every divisor `d` of `m`, from `x^d - 1 = prod_{e | d} Phi_e`.
fn cyclotomics(m: usize) -> Vec<(usize, Poly)> {
    let mut known: HashMap<usize, Poly> = HashMap::new();
    for d in divisors(m) {
        let mut p = vec![0i64; d + 1];
        p[0] = -1;
        p[d] = 1;
        for e in divisors(d).into_iter().filter(|&e| e < d) {
            p = div_monic(&p, &known[&e]);
        }
        known.insert(d, p);
    }
    let mut out: Vec<(usize, Poly)> = known.into_iter().collect();
    out.sort();
    out
}

fn cyclic_period(s: &[bool]) -> usize {
    let m = s.len();
    (1..=m)
        .find(|&q| m.is_multiple_of(q) && (0..m).all(|i| s[i] == s[(i + q) % m]))
        .unwrap()
}

/// `dim W_S` through the cyclotomic factorisation.
fn span_dim(s: &[bool], k: usize, phis: &[(usize, Poly)]) -> usize {
    let m = s.len();
    let c: Poly = s.iter().map(|&b| if b { (m - k) as i64 } else { -(k as i64) }).collect();
    let c = trim(c);
    let gcd_deg: usize = phis
        .iter()
        .filter(|(_, phi)| rem_monic(&c, phi).iter().all(|&x| x == 0))
        .map(|(_, phi)| phi.len() - 1)
        .sum();
    m - gcd_deg
}

/// `D*(m, k)` for `k = 1..m-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DStarTable {
    pub m: usize,
    values: Vec<usize>,
}

impl DStarTable {
    pub fn get(&self, k: usize) -> usize {
        assert!(1 <= k && k < self.m, "k out of range");
        self.values[k - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn sum(&self) -> usize {
        self.values.iter().sum()
    }
}

fn check_m(m: usize) -> Result<()> {
    if !(2..=MAX_M).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "D* needs 2 <= m <= {MAX_M}, got {m}"
        )));
    }
    Ok(())
}

/// Calls `f` on every `k`-subset of `Z_m` containing 0 (every subset has a
/// rotation of that form, and both terms are rotation invariant).
fn for_each_rooted_subset(m: usize, k: usize, mut f: impl FnMut(&[bool])) {
    let mut s = vec![false; m];
    s[0] = true;
    fn rec(s: &mut Vec<bool>, from: usize, left: usize, f: &mut impl FnMut(&[bool])) {
        if left == 0 {
            f(s);
            return;
        }
        for i in from..=s.len() - left {
            s[i] = true;
            rec(s, i + 1, left - 1, f);
            s[i] = false;
        }
    }
    rec(&mut s, 1, k - 1, &mut f);
}

fn compute_table(m: usize) -> DStarTable {
    let phis = cyclotomics(m);
    let values = (1..m)
        .map(|k| {
            let mut best = usize::MAX;
            for_each_rooted_subset(m, k, |s| {
                best = best.min(m - cyclic_period(s) + span_dim(s, k, &phis));
            });
            best
        })
        .collect();
    DStarTable { m, values }
}

/// The table for `m`, computed once per process.
pub fn dstar_table(m: usize) -> Result<Arc<DStarTable>> {
    check_m(m)?;
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<DStarTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&m) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(compute_table(m));
    tables.lock().unwrap().insert(m, Arc::clone(&t));
    Ok(t)
}

pub fn dstar(m: usize, k: usize) -> Result<usize> {
    check_m(m)?;
    if !(1..m).contains(&k) {
        return Err(Error::InvalidParameter(format!("D*({m}, k) needs 1 <= k < m, got {k}")));
    }
    Ok(dstar_table(m)?.get(k))
}

/// Rank of an integer matrix by integer row reduction, each row kept
/// primitive (divided by the gcd of its entries).
pub fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..c {
        let Some(piv) = (rank..r).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        for i in rank + 1..r {
            let f = rows[i][col];
            if f == 0 {
                continue;
            }
            let p = rows[rank][col];
            for j in 0..c {
                rows[i][j] = rows[i][j] * p - rows[rank][j] * f;
            }
            let g = rows[i].iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                rows[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

/// `D*(m, k)` by direct rank computation of the circulant matrix over all
/// `k`-subsets; slow, used to cross-check the cyclotomic method.
pub fn dstar_by_rank(m: usize, k: usize) -> Result<usize> {
    check_m(m)?;
    if !(1..m).contains(&k) {
        return Err(Error::InvalidParameter(format!("D*({m}, k) needs 1 <= k < m, got {k}")));
    }
    let mut best = usize::MAX;
    for code in 0u32..1 << m {
        if code.count_ones() as usize != k {
            continue;
        }
        let s: Vec<bool> = (0..m).map(|i| code >> i & 1 == 1).collect();
        let c: Vec<i128> = s.iter().map(|&b| if b { (m - k) as i128 } else { -(k as i128) }).collect();
        let rows: Vec<Vec<i128>> = (0..m).map(|j| (0..m).map(|i| c[(i + m - j) % m]).collect()).collect();
        best = best.min(m - cyclic_period(&s) + integer_rank(rows));
    }
    Ok(best)
}
