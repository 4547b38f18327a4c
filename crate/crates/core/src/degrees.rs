//! Ramsey degrees of local orders, the extension-class coloring behind the
//! lower bound, and a brute-force verifier for `Z -> (Y)^X_{k,l}`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pstruct::{self, enumerate_extensions, PnStructure};
use crate::tangent::{self, TangentError};
use crate::tournament::{automorphisms, is_isomorphic, is_local_order, Tournament};

pub const DEFAULT_BUDGET: u64 = 1 << 24;
pub const BUDGET_ENV: &str = "RAMSEY_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("tournament on {0} vertices is not a local order")]
    NotLocalOrder(usize),
    #[error("formula gives {formula} but {enumerated} extensions were enumerated")]
    CrossCheck { formula: usize, enumerated: usize },
    #[error("the structure must be nonempty")]
    Empty,
    #[error("extension does not project onto the ambient tournament")]
    NotAnExtension,
    #[error(transparent)]
    Structure(#[from] pstruct::PnError),
    #[error(transparent)]
    Tangent(#[from] TangentError),
    #[error("search needs {required} colorings, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("k and l must be at least 1 (got k = {k}, l = {l})")]
    BadParameters { k: usize, l: usize },
    #[error("at most 64 colors are supported, got {0}")]
    TooManyColors(usize),
    #[error("coloring has {got} values for {expected} copies")]
    PartialColoring { expected: usize, got: usize },
    #[error("color {color} is outside 0..{k}")]
    ColorOutOfRange { color: usize, k: usize },
}

/// The copies of `pattern` inside `ambient`, as vertex bitmasks in
/// increasing numeric order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopySet {
    pub ambient: Tournament,
    pub pattern: Tournament,
    pub copies: Vec<u64>,
}

impl CopySet {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn vertices(&self, i: usize) -> Vec<usize> {
        mask_vertices(self.copies[i])
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.copies.binary_search(&mask).ok()
    }
}

fn mask_vertices(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(u64)) {
    fn go(start: usize, n: usize, left: usize, acc: u64, visit: &mut impl FnMut(u64)) {
        if left == 0 {
            visit(acc);
            return;
        }
        for v in start..=n - left {
            go(v + 1, n, left - 1, acc | 1 << v, visit);
        }
    }
    if k <= n {
        go(0, n, k, 0, &mut visit);
    }
}

pub fn copies(z: &Tournament, x: &Tournament) -> CopySet {
    let target = x.canonical_code();
    let mut found = Vec::new();
    for_each_subset(z.len(), x.len(), |mask| {
        if z.induced(&mask_vertices(mask)).canonical_code() == target {
            found.push(mask);
        }
    });
    found.sort_unstable();
    CopySet {
        ambient: z.clone(),
        pattern: x.clone(),
        copies: found,
    }
}

/// `t(X) = 2|X| / |Aut(X)|`, cross-checked against the number of extensions.
pub fn small_ramsey_degree(x: &Tournament) -> Result<usize, DegreeError> {
    if x.is_empty() {
        return Err(DegreeError::Empty);
    }
    if !is_local_order(x) {
        return Err(DegreeError::NotLocalOrder(x.len()));
    }
    let formula = 2 * x.len() / automorphisms(x).len();
    let enumerated = enumerate_extensions(x).len();
    if formula != enumerated {
        return Err(DegreeError::CrossCheck {
            formula,
            enumerated,
        });
    }
    Ok(formula)
}

/// `T(X) = t(X) * tan^(2|X|-1)(0)`.
///
/// The reduction from local orders to two-part orders colors each extension
/// class with a count written `Δ_{|X|}`, which is never defined. Two readings
/// fit the surrounding argument: the odd tangent derivative
/// `tan^(2|X|-1)(0)`, or the number of Devlin types of a `|X|`-element set.
/// They agree wherever both can be computed (see the devlin counts), and the
/// first is what is used here.
pub fn big_ramsey_degree(x: &Tournament) -> Result<BigInt, DegreeError> {
    let small = small_ramsey_degree(x)?;
    Ok(BigInt::from(small) * tangent::tangent_derivative(2 * x.len() - 1)?)
}

/// Big degree of a partitioned linear order: depends only on its size.
pub fn big_ramsey_degree_pn(x: &PnStructure) -> Result<BigInt, DegreeError> {
    if x.is_empty() {
        return Err(DegreeError::Empty);
    }
    Ok(tangent::tangent_derivative(2 * x.len() - 1)?)
}

/// A `k`-coloring of the copies in `copies`, indexed in their order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub k: usize,
    pub values: Vec<usize>,
}

impl Coloring {
    pub fn distinct_colors(&self) -> usize {
        let mut seen = vec![false; self.k];
        self.values.iter().for_each(|&c| seen[c] = true);
        seen.into_iter().filter(|&b| b).count()
    }
}

/// Colors each copy of `x` in `z` by which extension of `x` it carries
/// inside `ext`. `z` is aligned with the positions of `ext` through one fixed
/// isomorphism onto `project(ext)`.
pub fn lower_bound_coloring(
    z: &Tournament,
    ext: &PnStructure,
    x: &Tournament,
) -> Result<(CopySet, Coloring), DegreeError> {
    let image = pstruct::project(ext)?;
    let align = is_isomorphic(z, &image).ok_or(DegreeError::NotAnExtension)?;
    let classes = enumerate_extensions(x);
    if classes.is_empty() {
        return Err(DegreeError::NotLocalOrder(x.len()));
    }
    let set = copies(z, x);
    let values = (0..set.len())
        .map(|i| {
            let positions: Vec<usize> = set.vertices(i).iter().map(|&v| align.apply(v)).collect();
            classes
                .index_of(&ext.restrict(&positions))
                .expect("a substructure of an extension extends its projection")
        })
        .collect();
    let coloring = Coloring {
        k: classes.len(),
        values,
    };
    Ok((set, coloring))
}

/// `Z -> (Y)^X_{k,l}`: every `k`-coloring of the copies of `X` in `Z` leaves
/// some copy of `Y` whose `X`-copies carry at most `l` colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowQuery {
    pub z: Tournament,
    pub y: Tournament,
    pub x: Tournament,
    pub k: usize,
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowOptions {
    /// Largest coloring space `k^m` searched exhaustively.
    pub budget: u64,
    /// Worker cap; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Skip colorings that are not least in their `Aut(Z)` orbit.
    pub symmetry_pruning: bool,
}

impl Default for ArrowOptions {
    fn default() -> Self {
        ArrowOptions {
            budget: default_budget(),
            threads: None,
            symmetry_pruning: false,
        }
    }
}

/// `RAMSEY_BUDGET` if set to an integer, else [`DEFAULT_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// No copy of `Y` exists, so every coloring is bad.
    NoTargetCopies,
    /// Some copy of `Y` contains at most `l` copies of `X`.
    FewCopies,
    /// `l >= k`.
    EnoughColors,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowOutcome {
    pub holds: bool,
    pub decided_by: Decision,
    /// Colorings covered, counted in lexicographic order up to and including
    /// the counterexample (or the whole space).
    pub colorings_examined: u64,
    pub x_copies: CopySet,
    pub y_copies: usize,
    pub counterexample: Option<Coloring>,
}

struct Instance {
    l: usize,
    m: usize,
    // X-copy indices inside each Y-copy
    targets: Vec<Vec<u32>>,
}

impl Instance {
    fn new(q: &ArrowQuery, xs: &CopySet) -> (Self, usize) {
        let ys = copies(&q.z, &q.y);
        let targets = ys
            .copies
            .iter()
            .map(|&ym| {
                xs.copies
                    .iter()
                    .enumerate()
                    .filter(|&(_, &xm)| xm & !ym == 0)
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        let inst = Instance {
            l: q.l,
            m: xs.len(),
            targets,
        };
        (inst, ys.len())
    }

    fn is_bad(&self, values: &[u8]) -> bool {
        self.targets.iter().all(|t| {
            let mut seen = 0u64;
            let mut count = 0;
            for &i in t {
                let bit = 1u64 << values[i as usize];
                if seen & bit == 0 {
                    seen |= bit;
                    count += 1;
                    if count > self.l {
                        return true;
                    }
                }
            }
            false
        })
    }
}

fn check_parameters(q: &ArrowQuery) -> Result<(), DegreeError> {
    if q.k == 0 || q.l == 0 {
        return Err(DegreeError::BadParameters { k: q.k, l: q.l });
    }
    if q.k > 64 {
        return Err(DegreeError::TooManyColors(q.k));
    }
    Ok(())
}

/// Permutations of X-copy indices induced by the automorphisms of `Z`.
fn copy_permutations(xs: &CopySet) -> Vec<Vec<u32>> {
    automorphisms(&xs.ambient)
        .into_iter()
        .map(|g| {
            xs.copies
                .iter()
                .map(|&mask| {
                    let image = mask_vertices(mask)
                        .into_iter()
                        .fold(0u64, |acc, v| acc | 1 << g.apply(v));
                    xs.index_of(image).expect("automorphisms permute copies") as u32
                })
                .collect()
        })
        .filter(|p: &Vec<u32>| p.iter().enumerate().any(|(i, &j)| i as u32 != j))
        .collect()
}

// `values` is least among `values ∘ p` for every copy permutation `p`.
fn orbit_minimal(values: &[u8], perms: &[Vec<u32>]) -> bool {
    perms.iter().all(|p| {
        for (i, &pi) in p.iter().enumerate() {
            let (a, b) = (values[i], values[pi as usize]);
            if a != b {
                return a < b;
            }
        }
        true
    })
}

const CHUNK: u64 = 1 << 12;

/// Exhaustive check of `Z -> (Y)^X_{k,l}`.
///
/// Colorings are read as base-`k` numbers with copy 0 as the most
/// significant digit and searched in increasing order, so the reported
/// counterexample is the lexicographically least one regardless of the
/// number of workers. Symmetry pruning keeps that counterexample: the least
/// bad coloring is least in its orbit, since automorphisms preserve badness.
pub fn arrow_check(q: &ArrowQuery, opts: &ArrowOptions) -> Result<ArrowOutcome, DegreeError> {
    check_parameters(q)?;
    let xs = copies(&q.z, &q.x);
    let (inst, y_copies) = Instance::new(q, &xs);
    let m = inst.m;
    let decided = |holds, decided_by, counterexample| ArrowOutcome {
        holds,
        decided_by,
        colorings_examined: 0,
        x_copies: xs.clone(),
        y_copies,
        counterexample,
    };
    if inst.targets.is_empty() {
        let c = Coloring {
            k: q.k,
            values: vec![0; m],
        };
        return Ok(decided(false, Decision::NoTargetCopies, Some(c)));
    }
    if q.l >= q.k {
        return Ok(decided(true, Decision::EnoughColors, None));
    }
    if inst.targets.iter().any(|t| t.len() <= q.l) {
        return Ok(decided(true, Decision::FewCopies, None));
    }

    let total = (q.k as u64)
        .checked_pow(m as u32)
        .filter(|&t| t <= opts.budget)
        .ok_or_else(|| DegreeError::BudgetExceeded {
            required: format!("{}^{}", q.k, m),
            budget: opts.budget,
        })?;
    let perms = if opts.symmetry_pruning {
        copy_permutations(&xs)
    } else {
        Vec::new()
    };

    let scan = |chunk: u64| -> Option<(u64, Vec<u8>)> {
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut digits = vec![0u8; m];
        let mut rest = start;
        for d in digits.iter_mut().rev() {
            *d = (rest % q.k as u64) as u8;
            rest /= q.k as u64;
        }
        for idx in start..end {
            if (perms.is_empty() || orbit_minimal(&digits, &perms)) && inst.is_bad(&digits) {
                return Some((idx, digits));
            }
            for d in digits.iter_mut().rev() {
                *d += 1;
                if (*d as usize) < q.k {
                    break;
                }
                *d = 0;
            }
        }
        None
    };
    let chunks = total.div_ceil(CHUNK);
    let search = || (0..chunks).into_par_iter().find_map_first(scan);
    let found = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(search),
        None => search(),
    };

    Ok(match found {
        Some((idx, digits)) => ArrowOutcome {
            holds: false,
            decided_by: Decision::Search,
            colorings_examined: idx + 1,
            x_copies: xs,
            y_copies,
            counterexample: Some(Coloring {
                k: q.k,
                values: digits.into_iter().map(usize::from).collect(),
            }),
        },
        None => ArrowOutcome {
            holds: true,
            decided_by: Decision::Search,
            colorings_examined: total,
            x_copies: xs,
            y_copies,
            counterexample: None,
        },
    })
}

/// True iff every copy of `Y` sees more than `l` colors under `c`.
pub fn verify_coloring_is_witness(q: &ArrowQuery, c: &Coloring) -> Result<bool, DegreeError> {
    check_parameters(q)?;
    let xs = copies(&q.z, &q.x);
    if c.values.len() != xs.len() {
        return Err(DegreeError::PartialColoring {
            expected: xs.len(),
            got: c.values.len(),
        });
    }
    if let Some(&color) = c.values.iter().find(|&&v| v >= q.k) {
        return Err(DegreeError::ColorOutOfRange { color, k: q.k });
    }
    let (inst, _) = Instance::new(q, &xs);
    let values: Vec<u8> = c.values.iter().map(|&v| v as u8).collect();
    Ok(inst.is_bad(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::circular_tournament;

    fn word(s: &str) -> PnStructure {
        PnStructure::parse_word(s, Some(2)).unwrap()
    }

    fn query(z: &Tournament, y: &Tournament, x: &Tournament, k: usize, l: usize) -> ArrowQuery {
        ArrowQuery {
            z: z.clone(),
            y: y.clone(),
            x: x.clone(),
            k,
            l,
        }
    }

    fn opts() -> ArrowOptions {
        ArrowOptions {
            budget: DEFAULT_BUDGET,
            threads: None,
            symmetry_pruning: false,
        }
    }

    #[test]
    fn copy_examples() {
        let c1 = circular_tournament(1);
        assert_eq!(copies(&c1, &Tournament::point()).len(), 3);
        assert_eq!(copies(&c1, &c1).len(), 1);
        assert_eq!(
            copies(&Tournament::transitive(3), &Tournament::transitive(2)).len(),
            3
        );
        assert!(copies(&Tournament::transitive(3), &c1).is_empty());
    }

    #[test]
    fn degree_values() {
        let chain3 = Tournament::transitive(3);
        let c1 = circular_tournament(1);
        let small: Vec<usize> = [
            Tournament::point(),
            Tournament::transitive(2),
            chain3.clone(),
            c1.clone(),
        ]
        .iter()
        .map(|t| small_ramsey_degree(t).unwrap())
        .collect();
        assert_eq!(small, vec![2, 4, 6, 2]);
        let big: Vec<BigInt> = [Tournament::point(), Tournament::transitive(2), chain3, c1]
            .iter()
            .map(|t| big_ramsey_degree(t).unwrap())
            .collect();
        assert_eq!(big, [2, 8, 96, 32].map(BigInt::from));
        for n in 1..=3 {
            assert_eq!(small_ramsey_degree(&circular_tournament(n)).unwrap(), 2);
        }
        assert_eq!(
            small_ramsey_degree(&crate::tournament::dominated_cycle()),
            Err(DegreeError::NotLocalOrder(4))
        );
        let pn: Vec<BigInt> = ["1", "12", "212"]
            .iter()
            .map(|w| big_ramsey_degree_pn(&word(w)).unwrap())
            .collect();
        assert_eq!(pn, [1, 2, 16].map(BigInt::from));
    }

    #[test]
    fn lower_bound_coloring_on_the_cycle() {
        let c1 = circular_tournament(1);
        let ext = word("121");
        let (set, col) = lower_bound_coloring(&c1, &ext, &Tournament::point()).unwrap();
        assert_eq!(set.len(), 3);
        let mut sorted = col.values.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 0, 1]);
        let (_, whole) = lower_bound_coloring(&c1, &ext, &c1).unwrap();
        assert_eq!(whole.values.len(), 1);
        assert_eq!(
            lower_bound_coloring(&Tournament::transitive(3), &ext, &Tournament::point()),
            Err(DegreeError::NotAnExtension)
        );
    }

    #[test]
    fn lower_bound_takes_two_values_on_circular_copies() {
        for n in 1..=3 {
            let z = circular_tournament(n);
            let ext = enumerate_extensions(&z).representatives[0].clone();
            let (_, col) = lower_bound_coloring(&z, &ext, &Tournament::point()).unwrap();
            assert_eq!(col.distinct_colors(), 2);
        }
    }

    #[test]
    fn arrow_examples() {
        let c1 = circular_tournament(1);
        let p = Tournament::point();
        let out = arrow_check(&query(&c1, &c1, &p, 2, 1), &opts()).unwrap();
        assert!(!out.holds);
        let witness = out.counterexample.unwrap();
        assert!(verify_coloring_is_witness(&query(&c1, &c1, &p, 2, 1), &witness).unwrap());
        assert!(
            arrow_check(&query(&c1, &c1, &p, 2, 2), &opts())
                .unwrap()
                .holds
        );
        assert!(
            arrow_check(&query(&c1, &c1, &p, 1, 1), &opts())
                .unwrap()
                .holds
        );
        let constant = Coloring {
            k: 2,
            values: vec![1; 3],
        };
        assert!(!verify_coloring_is_witness(&query(&c1, &c1, &p, 2, 1), &constant).unwrap());
        assert!(matches!(
            verify_coloring_is_witness(
                &query(&c1, &c1, &p, 2, 1),
                &Coloring {
                    k: 2,
                    values: vec![0]
                }
            ),
            Err(DegreeError::PartialColoring {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn missing_target_fails_even_with_many_colors() {
        let out = arrow_check(
            &query(
                &Tournament::transitive(3),
                &circular_tournament(1),
                &Tournament::point(),
                2,
                5,
            ),
            &opts(),
        )
        .unwrap();
        assert!(!out.holds);
        assert_eq!(out.decided_by, Decision::NoTargetCopies);
    }

    #[test]
    fn lower_bound_coloring_refutes_one_fewer_color() {
        let c2 = circular_tournament(2);
        let arc = Tournament::transitive(2);
        let q = query(&c2, &c2, &arc, 4, 3);
        let out = arrow_check(&q, &opts()).unwrap();
        assert!(!out.holds);
        let ext = enumerate_extensions(&c2).representatives[0].clone();
        let (_, col) = lower_bound_coloring(&c2, &ext, &arc).unwrap();
        assert!(verify_coloring_is_witness(&q, &col).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let c2 = circular_tournament(2);
        let q = query(&c2, &c2, &Tournament::transitive(2), 4, 3);
        let tight = ArrowOptions {
            budget: 1000,
            ..opts()
        };
        assert!(matches!(
            arrow_check(&q, &tight),
            Err(DegreeError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn pruning_and_threads_do_not_change_the_answer() {
        let c2 = circular_tournament(2);
        let arc = Tournament::transitive(2);
        let cases = [
            query(&c2, &circular_tournament(1), &Tournament::point(), 2, 1),
            query(&c2, &Tournament::transitive(3), &Tournament::point(), 2, 1),
            query(&c2, &c2, &arc, 4, 3),
            query(&c2, &Tournament::transitive(3), &arc, 3, 2),
        ];
        for q in &cases {
            let base = arrow_check(q, &opts()).unwrap();
            for (threads, pruning) in [(Some(1), false), (Some(3), true), (None, true)] {
                let o = ArrowOptions {
                    threads,
                    symmetry_pruning: pruning,
                    ..opts()
                };
                let other = arrow_check(q, &o).unwrap();
                assert_eq!(other.holds, base.holds);
                assert_eq!(other.counterexample, base.counterexample);
            }
        }
    }
}
