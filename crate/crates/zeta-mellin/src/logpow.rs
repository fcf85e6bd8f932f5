//! Symbolic algebra for sums of terms `c * ln(t)^j * t^(-m)` and
//! Euler-Maclaurin tail summation over them.
//!
//! Series tails in this crate all reduce to sums `sum_{n>N} ln(n)^j / n^m`.
//! Computing those through zeta values cancels catastrophically once the
//! exponents grow, so tails are summed directly: closed-form upper integral
//! plus Euler-Maclaurin corrections, every ingredient exact in this algebra.

/// One term `c * ln(t)^j * t^(-m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub c: f64,
    pub j: u32,
    pub m: f64,
}

/// A finite sum of [`Term`]s, closed under differentiation.
#[derive(Debug, Clone, Default)]
pub struct LogPowExpr {
    terms: Vec<Term>,
}

/// Bernoulli numbers B_2, B_4, ..., B_30.
pub const BERNOULLI_2J: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// n! as f64 for n <= 170.
pub fn factorial(n: u32) -> f64 {
    assert!(n <= 170, "factorial overflows f64 beyond 170");
    (1..=n).fold(1.0f64, |acc, k| acc * k as f64)
}

impl LogPowExpr {
    pub fn new(terms: Vec<Term>) -> Self {
        let mut e = LogPowExpr { terms };
        e.merge();
        e
    }

    pub fn single(c: f64, j: u32, m: f64) -> Self {
        LogPowExpr {
            terms: vec![Term { c, j, m }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn merge(&mut self) {
        use std::collections::BTreeMap;
        let mut map: BTreeMap<(u32, u64), f64> = BTreeMap::new();
        for t in &self.terms {
            *map.entry((t.j, t.m.to_bits())).or_insert(0.0) += t.c;
        }
        self.terms = map
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|((j, mbits), c)| Term {
                c,
                j,
                m: f64::from_bits(mbits),
            })
            .collect();
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        let l = t.ln();
        self.terms
            .iter()
            .map(|term| term.c * l.powi(term.j as i32) * t.powf(-term.m))
            .sum()
    }

    /// d/dt of the expression; stays inside the algebra.
    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if t.j > 0 {
                out.push(Term {
                    c: t.c * t.j as f64,
                    j: t.j - 1,
                    m: t.m + 1.0,
                });
            }
            if t.m != 0.0 {
                out.push(Term {
                    c: -t.c * t.m,
                    j: t.j,
                    m: t.m + 1.0,
                });
            }
        }
        LogPowExpr::new(out)
    }

    /// `integral_{n}^{inf}` in closed form. Every term must have `m > 1`.
    ///
    /// For a single term: `n^(1-m) * sum_{i=0..=j} j!/(j-i)! * ln(n)^(j-i) / (m-1)^(i+1)`.
    pub fn integral_upper(&self, n: f64) -> f64 {
        debug_assert!(n > 0.0);
        let l = n.ln();
        self.terms
            .iter()
            .map(|t| {
                assert!(t.m > 1.0, "divergent upper integral: exponent {} <= 1", t.m);
                let a = t.m - 1.0;
                let mut inner = 0.0f64;
                let mut falling = 1.0f64; // j!/(j-i)!
                let mut apow = a; // (m-1)^(i+1)
                for i in 0..=t.j {
                    inner += falling * l.powi((t.j - i) as i32) / apow;
                    falling *= (t.j - i) as f64;
                    apow *= a;
                }
                t.c * n.powf(1.0 - t.m) * inner
            })
            .sum()
    }
}

/// `sum_{k > n} expr(k)` by Euler-Maclaurin with `orders` Bernoulli
/// correction terms:
///
/// `integral_n^inf expr - expr(n)/2 - sum_{j=1..=orders} B_2j/(2j)! expr^(2j-1)(n)`.
///
/// All terms of `expr` must decay (`m > 1`). With the default call sites
/// (`n >= 30`, `orders = 5`) the truncation error sits far below 1e-15
/// relative.
pub fn em_tail_sum(expr: &LogPowExpr, n: f64, orders: usize) -> f64 {
    assert!(orders <= BERNOULLI_2J.len());
    let mut total = expr.integral_upper(n) - 0.5 * expr.eval(n);
    let mut d = expr.derivative(); // holds expr^(2j-1) at each step
    for j in 1..=orders as u32 {
        total -= BERNOULLI_2J[j as usize - 1] / factorial(2 * j) * d.eval(n);
        if (j as usize) < orders {
            d = d.derivative().derivative();
        }
    }
    total
}

/// `sum_{n > bound} ln(n)^j / n^m` for integer `bound`.
pub fn tail_log_pow(j: u32, m: f64, bound: u32) -> f64 {
    em_tail_sum(&LogPowExpr::single(1.0, j, m), bound as f64, 5)
}
