//! Truncation-based evaluation, independent of the closed forms.
//!
//! The structure is truncated at the sizes `k - 3 ..= k` (depth and branch
//! bound both equal to the size). Rank counts are read off the iterated
//! derivatives: the `p`-th derivative has one leaf per point of rank at
//! least `p`, and the leaves that do not survive one more derivative are
//! the points of rank exactly `p`. A count that is the same at every size
//! is taken as finite, one that grows as infinite; a count that shrinks,
//! or a rank too close to the depth, is reported as
//! [`EqLogicError::DepthInsufficient`]. Four sizes rather than two keep
//! sums whose components repeat with period up to 3 from looking finite.
//!
//! Below the root a sum's truncation splits into the truncations of its
//! components, so layer counts of sums are added up from toy spread
//! counts, which are cached per effective size.

use super::evaluate::{eval_skeleton, family_verdict, RankCounts, Verdict};
use super::formula::Formula;
use super::recognize::recognize;
use super::EqLogicError;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::spread::{SpreadLaw, TruncatedTree};
use crate::toyspread::{toy_law, Card, SumDescriptor};

/// Derivatives must keep at least this many levels at size `k - 1`.
const MIN_HEIGHT: usize = 3;
/// Number of consecutive sizes compared.
const WINDOW: usize = 4;

#[derive(Clone, Debug)]
pub struct OracleModel {
    depth: usize,
    /// Layer counts, largest size first.
    sizes: Vec<Vec<usize>>,
}

fn direct_counts(law: &dyn SpreadLaw, depth: usize, bound: u64) -> Vec<usize> {
    let tree = TruncatedTree::build(law, depth, bound);
    tree.layers(depth + 1).iter().map(|l| l.leaves).collect()
}

type ToyKey = (u64, usize, u64);

fn toy_counts(n: u64, depth: usize, bound: u64) -> Arc<Vec<usize>> {
    static CACHE: OnceLock<Mutex<HashMap<ToyKey, Arc<Vec<usize>>>>> = OnceLock::new();
    let key = (n.min(bound), depth, bound);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = Arc::new(direct_counts(&toy_law(key.0), depth, bound));
    cache.lock().expect("cache lock").insert(key, v.clone());
    v
}

/// Leaf counts of the derivatives of the size-`size` truncation. Layers
/// within two levels of the root may be missing.
fn leaf_counts(desc: &SumDescriptor, size: usize) -> Vec<usize> {
    let bound = size as u64;
    match desc {
        SumDescriptor::Toy { n } => toy_counts(*n, size, bound).to_vec(),
        SumDescriptor::ClosureFan { .. } => direct_counts(&desc.law(), size, bound),
        _ => {
            let law = desc.law();
            if size == 0 || !law.accepts(&[]) {
                return Vec::new();
            }
            let width = law.child_bound(&[]).map_or(bound, |b| b.saturating_add(1).min(bound));
            let mut total = vec![0; size];
            for i in 0..width {
                let k = desc.component_size(i).unwrap_or(0);
                for (t, c) in total.iter_mut().zip(toy_counts(k, size - 1, bound).iter()) {
                    *t += c;
                }
            }
            total
        }
    }
}

impl OracleModel {
    pub fn build(desc: &SumDescriptor, depth: usize) -> Result<Self, EqLogicError> {
        if depth < MIN_HEIGHT + 2 {
            return Err(EqLogicError::DepthInsufficient(format!("depth {depth} is below {}", MIN_HEIGHT + 2)));
        }
        let sizes = (0..WINDOW).into_par_iter().map(|j| leaf_counts(desc, depth - j)).collect();
        Ok(OracleModel { depth, sizes })
    }

    fn layer(v: &[usize], p: usize) -> usize {
        v.get(p).copied().unwrap_or(0)
    }

    fn settle(&self, deepest: usize, count: impl Fn(&[usize]) -> usize, what: &str) -> Result<Card, EqLogicError> {
        if deepest + MIN_HEIGHT > self.depth - 1 {
            return Err(EqLogicError::DepthInsufficient(format!("{what} needs more than depth {}", self.depth)));
        }
        let counts: Vec<usize> = self.sizes.iter().map(|v| count(v)).collect();
        if let Some(w) = counts.windows(2).find(|w| w[0] < w[1]) {
            return Err(EqLogicError::DepthInsufficient(format!("{what}: count fell from {} to {}", w[1], w[0])));
        }
        if counts[0] == counts[counts.len() - 1] {
            Ok(Card::Finite(counts[0] as u64))
        } else {
            Ok(Card::Infinite)
        }
    }
}

impl RankCounts for OracleModel {
    fn at_least(&self, p: u64) -> Result<Card, EqLogicError> {
        let p = p as usize;
        let what = format!("rank >= {p}");
        self.settle(p, |v| Self::layer(v, p), &what)
    }

    fn exactly(&self, p: u64) -> Result<Card, EqLogicError> {
        let p = p as usize;
        let exact = |v: &[usize]| Self::layer(v, p).saturating_sub(Self::layer(v, p + 1));
        let what = format!("rank = {p}");
        self.settle(p + 1, exact, &what)
    }
}

impl OracleModel {
    pub fn evaluate(&self, f: &Formula) -> Result<Verdict, EqLogicError> {
        if !f.is_sentence() {
            return Ok(Verdict::Unsupported("formula has free variables".into()));
        }
        let f = recognize(f);
        eval_skeleton(&f, &|fam| family_verdict(fam, self))
    }
}

/// Evaluates a family sentence on truncations of the structure.
pub fn oracle_evaluate(f: &Formula, structure: &SumDescriptor, depth: usize) -> Result<Verdict, EqLogicError> {
    OracleModel::build(structure, depth)?.evaluate(f)
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_sentence;
    use super::*;
    use crate::spread::Point;

    fn or(src: &str, d: &SumDescriptor, depth: usize) -> Result<Verdict, EqLogicError> {
        oracle_evaluate(&parse_sentence(src).unwrap(), d, depth)
    }

    #[test]
    fn toy_three() {
        let t3 = SumDescriptor::Toy { n: 3 };
        assert_eq!(or("rho[2]", &t3, 12), Ok(Verdict::Holds));
        assert_eq!(or("rho[1]", &t3, 12), Ok(Verdict::NegHolds));
        assert_eq!(or("psi[1]", &t3, 12), Ok(Verdict::Holds));
    }

    #[test]
    fn products() {
        let d = SumDescriptor::Product { n: 2, m: 3 };
        assert_eq!(or("rho[2,2]", &d, 12), Ok(Verdict::Holds));
        assert_eq!(or("psi[2,3]", &d, 12), Ok(Verdict::NegHolds));
    }

    #[test]
    fn closure_fan() {
        let d = SumDescriptor::ClosureFan { alpha: Point::constant(2) };
        assert_eq!(or("psi[1,1]", &d, 12), Ok(Verdict::Holds));
        assert_eq!(or("rho[2,1]", &d, 12), Ok(Verdict::Holds));
    }

    #[test]
    fn sum_counts_match_the_whole_truncation() {
        let sums = [
            SumDescriptor::Product { n: 3, m: 3 },
            SumDescriptor::OmegaProduct { m: 2 },
            SumDescriptor::FiniteSum { s: vec![2, 0, 4, 1] },
            SumDescriptor::SeqSum { alpha: crate::toyspread::SeqIndex::Periodic(Point::new(vec![5], vec![1, 3]).unwrap()) },
        ];
        for d in &sums {
            for size in 5..8 {
                let mut direct = direct_counts(&d.law(), size, size as u64);
                direct.resize(size - 1, 0);
                let mut split = leaf_counts(d, size);
                split.resize(size - 1, 0);
                assert_eq!(split, direct, "{d} at {size}");
            }
        }
    }

    #[test]
    fn shallow_depth_is_reported() {
        assert!(matches!(or("psi[9]", &SumDescriptor::Toy { n: 10 }, 12), Err(EqLogicError::DepthInsufficient(_))));
        assert!(matches!(or("psi[0]", &SumDescriptor::Toy { n: 2 }, 3), Err(EqLogicError::DepthInsufficient(_))));
    }
}
