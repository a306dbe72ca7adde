//! Monomial bookkeeping shared by every jet: graded ordering, product
//! triples and derivative maps, built once up to [`MAX_DEGREE`].

use std::sync::OnceLock;

use super::NVARS;

/// Largest truncation degree supported by the engine.
pub const MAX_DEGREE: usize = 12;

pub(crate) struct Tables {
    /// Exponent vectors in graded order (all degree-0, then degree-1, ...).
    pub exps: Vec<[u8; NVARS]>,
    /// `len[d]` = number of monomials of total degree `<= d` = C(d+4, 4).
    pub len: Vec<usize>,
    lookup: Vec<u32>,
    /// Product triples `(i, j, k)` with `m_i * m_j = m_k`, sorted by `k`.
    pub mul: Vec<(u32, u32, u32)>,
    /// `mul_end[d]` = number of triples whose product has degree `<= d`.
    pub mul_end: Vec<usize>,
    /// For each variable: `(source index, factor)` for every target monomial
    /// of degree `<= MAX_DEGREE - 1`.
    pub deriv: [Vec<(u32, f64)>; NVARS],
}

const SIDE: usize = MAX_DEGREE + 1;

fn key(e: &[u8; NVARS]) -> usize {
    e.iter().fold(0, |acc, &v| acc * SIDE + v as usize)
}

impl Tables {
    pub fn index_of(&self, e: &[u8; NVARS]) -> Option<usize> {
        if e.iter().map(|&v| v as usize).sum::<usize>() > MAX_DEGREE {
            return None;
        }
        let idx = self.lookup[key(e)];
        (idx != u32::MAX).then_some(idx as usize)
    }

    fn build() -> Self {
        let mut exps = Vec::new();
        let mut len = Vec::with_capacity(MAX_DEGREE + 1);
        for d in 0..=MAX_DEGREE {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    for c in (0..=d - a - b).rev() {
                        exps.push([a as u8, b as u8, c as u8, (d - a - b - c) as u8]);
                    }
                }
            }
            len.push(exps.len());
        }

        let mut lookup = vec![u32::MAX; SIDE.pow(NVARS as u32)];
        for (i, e) in exps.iter().enumerate() {
            lookup[key(e)] = i as u32;
        }

        let degree = |e: &[u8; NVARS]| e.iter().map(|&v| v as usize).sum::<usize>();
        let mut mul = Vec::new();
        for (i, ei) in exps.iter().enumerate() {
            let di = degree(ei);
            for (j, ej) in exps[..len[MAX_DEGREE - di]].iter().enumerate() {
                let mut ek = [0u8; NVARS];
                for v in 0..NVARS {
                    ek[v] = ei[v] + ej[v];
                }
                mul.push((i as u32, j as u32, lookup[key(&ek)]));
            }
        }
        mul.sort_unstable_by_key(|&(i, j, k)| (k, i, j));
        let mut mul_end = vec![0; MAX_DEGREE + 1];
        for (d, end) in mul_end.iter_mut().enumerate() {
            *end = mul.partition_point(|&(_, _, k)| (k as usize) < len[d]);
        }

        let deriv = std::array::from_fn(|v| {
            exps[..len[MAX_DEGREE - 1]]
                .iter()
                .map(|e| {
                    let mut src = *e;
                    src[v] += 1;
                    (lookup[key(&src)], src[v] as f64)
                })
                .collect()
        });

        Tables {
            exps,
            len,
            lookup,
            mul,
            mul_end,
            deriv,
        }
    }
}

pub(crate) fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(Tables::build)
}
