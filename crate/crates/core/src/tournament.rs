//! Finite tournaments: validation, isomorphism, automorphisms, canonical
//! forms and membership in the class of local orders.
//!
//! Vertices are always `0..n`. Arcs are stored as one out-neighbourhood
//! bitmask per vertex, so tournaments are limited to 64 vertices; everything
//! exhaustive in here is meant for desk-scale sizes (n ≤ 8 or so).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::pstruct;

/// Largest vertex count a [`Tournament`] can hold.
pub const MAX_VERTICES: usize = 64;

/// Default bound for [`enumerate_tournaments`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TournamentError {
    #[error("arc matrix has a loop at vertex {0}")]
    Diagonal(usize),
    #[error("vertices {0} and {1} carry arcs in both directions")]
    BothArcs(usize, usize),
    #[error("vertices {0} and {1} carry no arc")]
    NoArc(usize, usize),
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("tournaments are limited to {MAX_VERTICES} vertices, got {0}")]
    TooLarge(usize),
    #[error("enumeration bound exceeded: n = {n} > {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A finite tournament on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    out: Vec<u64>,
}

/// A map on vertex indices, used as the witness of isomorphisms and embeddings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexMap {
    image: Vec<usize>,
}

impl VertexMap {
    pub fn new(image: Vec<usize>) -> Self {
        VertexMap { image }
    }

    pub fn identity(n: usize) -> Self {
        VertexMap {
            image: (0..n).collect(),
        }
    }

    pub fn source_size(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u64;
        self.image.iter().all(|&v| {
            let fresh = seen & (1 << v) == 0;
            seen |= 1 << v;
            fresh
        })
    }
}

impl Tournament {
    /// Builds a tournament from an arc matrix, checking both invariants.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self, TournamentError> {
        let n = rows.len();
        if n > MAX_VERTICES {
            return Err(TournamentError::TooLarge(n));
        }
        let mut out = vec![0u64; n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TournamentError::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &arc) in row.iter().enumerate() {
                if arc {
                    out[i] |= 1 << j;
                }
            }
        }
        let t = Tournament { n, out };
        t.validate()?;
        Ok(t)
    }

    /// Builds a tournament from a predicate `arc(i, j)` evaluated for `i != j`.
    /// Only the upper triangle is consulted; the lower one is its complement.
    pub fn from_fn(n: usize, mut arc: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(n <= MAX_VERTICES, "tournament too large");
        let mut out = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if arc(i, j) {
                    out[i] |= 1 << j;
                } else {
                    out[j] |= 1 << i;
                }
            }
        }
        Tournament { n, out }
    }

    /// Tournament with `i -> j` iff `i < j`.
    pub fn transitive(n: usize) -> Self {
        Tournament::from_fn(n, |_, _| true)
    }

    pub fn point() -> Self {
        Tournament::transitive(1)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn arc(&self, i: usize, j: usize) -> bool {
        self.out[i] >> j & 1 == 1
    }

    #[inline]
    pub fn out_mask(&self, i: usize) -> u64 {
        self.out[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out[i].count_ones() as usize
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.arc(i, j)).collect())
            .collect()
    }

    /// Returns normally iff the arc relation is irreflexive, total and
    /// antisymmetric; otherwise reports the first offending pair.
    pub fn validate(&self) -> Result<(), TournamentError> {
        for i in 0..self.n {
            if self.arc(i, i) {
                return Err(TournamentError::Diagonal(i));
            }
            for j in i + 1..self.n {
                match (self.arc(i, j), self.arc(j, i)) {
                    (true, true) => return Err(TournamentError::BothArcs(i, j)),
                    (false, false) => return Err(TournamentError::NoArc(i, j)),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// The subtournament induced on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Tournament {
        Tournament::from_fn(vertices.len(), |a, b| self.arc(vertices[a], vertices[b]))
    }

    /// Relabels vertex `perm[k]` as `k`.
    pub fn relabel(&self, perm: &[usize]) -> Tournament {
        self.induced(perm)
    }

    /// Upper-triangle code in row-major order, first pair most significant.
    /// Comparing codes of equal-size tournaments is comparing their arc
    /// matrices lexicographically: the first differing entry of two
    /// tournament matrices always lies above the diagonal.
    fn code_under(&self, perm: &[u8]) -> u64 {
        let mut code = 0u64;
        for a in 0..self.n {
            let row = self.out[perm[a] as usize];
            for &pb in &perm[a + 1..] {
                code = code << 1 | (row >> pb & 1);
            }
        }
        code
    }

    /// Row-major upper-triangle code of the current labelling.
    pub fn code(&self) -> u64 {
        let id: Vec<u8> = (0..self.n as u8).collect();
        self.code_under(&id)
    }

    fn from_code(n: usize, code: u64) -> Tournament {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut idx = 0;
        Tournament::from_fn(n, |_, _| {
            // from_fn visits pairs in row-major upper order
            let bit = code >> (pairs - 1 - idx) & 1 == 1;
            idx += 1;
            bit
        })
    }

    /// Canonical code: the least [`code`](Self::code) over all relabellings.
    pub fn canonical_code(&self) -> u64 {
        if self.n <= 1 {
            return 0;
        }
        assert!(
            self.n <= 9,
            "canonical forms are computed by exhaustive relabelling (n <= 9)"
        );
        permutations(self.n)
            .iter()
            .map(|p| self.code_under(p))
            .min()
            .expect("at least one permutation")
    }

    /// The lexicographically least arc matrix over all relabellings.
    pub fn canonical_form(&self) -> Tournament {
        Tournament::from_code(self.n, self.canonical_code())
    }

    /// Rows as `0`/`1` strings, the body of the text format.
    pub fn rows(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if self.arc(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Text format: the vertex count, then one row of `0`/`1` per vertex.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for row in self.rows() {
            s.push_str(&row);
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Tournament, TournamentError> {
        let err = |line: usize, column: usize, message: String| TournamentError::Parse {
            line,
            column,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (first_no, first) = lines
            .next()
            .ok_or_else(|| err(1, 1, "missing vertex count".into()))?;
        let n: usize = first.trim().parse().map_err(|_| {
            err(
                first_no,
                1,
                format!("expected vertex count, found {first:?}"),
            )
        })?;
        if n > MAX_VERTICES {
            return Err(err(
                first_no,
                1,
                format!("at most {MAX_VERTICES} vertices supported"),
            ));
        }
        let mut out = vec![0u64; n];
        let mut line_of = vec![0usize; n];
        for i in 0..n {
            let (no, row) = lines
                .next()
                .ok_or_else(|| err(first_no + i + 1, 1, format!("missing row {}", i + 1)))?;
            let row = row.trim();
            line_of[i] = no;
            if row.chars().count() != n {
                return Err(err(
                    no,
                    row.chars().count().min(n) + 1,
                    format!("row has {} entries, expected {n}", row.chars().count()),
                ));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => out[i] |= 1 << j,
                    other => return Err(err(no, j + 1, format!("unexpected character {other:?}"))),
                }
            }
        }
        if let Some((no, _)) = lines.next() {
            return Err(err(no, 1, "trailing content after the last row".into()));
        }
        let t = Tournament { n, out };
        t.validate().map_err(|e| match e {
            TournamentError::Diagonal(i) => {
                err(line_of[i], i + 1, "arc from a vertex to itself".into())
            }
            TournamentError::BothArcs(i, j) => err(
                line_of[j],
                i + 1,
                format!("arcs {i}->{j} and {j}->{i} both present"),
            ),
            TournamentError::NoArc(i, j) => {
                err(line_of[j], i + 1, format!("no arc between {i} and {j}"))
            }
            other => other,
        })?;
        Ok(t)
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({}: {})", self.n, self.rows().join("/"))
    }
}

impl FromStr for Tournament {
    type Err = TournamentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tournament::parse(s)
    }
}

/// All permutations of `0..n` as byte vectors, cached per `n`.
pub(crate) fn permutations(n: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; 10] = [const { OnceLock::new() }; 10];
    assert!(n < CACHE.len());
    CACHE[n].get_or_init(|| {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        heap_permute(n, &mut cur, &mut out);
        out
    })
}

fn heap_permute(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, cur, out);
}

/// Backtracking over bijections `a -> b` preserving arcs; calls `visit` on
/// every complete one and stops when it returns `false`.
fn for_each_isomorphism(a: &Tournament, b: &Tournament, mut visit: impl FnMut(&[usize]) -> bool) {
    if a.n != b.n {
        return;
    }
    let mut a_score: Vec<usize> = (0..a.n).map(|v| a.out_degree(v)).collect();
    let b_score: Vec<usize> = (0..b.n).map(|v| b.out_degree(v)).collect();
    {
        let mut sa = a_score.clone();
        let mut sb = b_score.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return;
        }
    }
    let mut image = vec![usize::MAX; a.n];
    let mut used = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        a: &Tournament,
        b: &Tournament,
        a_score: &mut [usize],
        b_score: &[usize],
        image: &mut Vec<usize>,
        used: &mut u64,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if v == a.n {
            return visit(image);
        }
        for w in 0..b.n {
            if *used >> w & 1 == 1 || a_score[v] != b_score[w] {
                continue;
            }
            let consistent = (0..v).all(|u| a.arc(u, v) == b.arc(image[u], w));
            if !consistent {
                continue;
            }
            image[v] = w;
            *used |= 1 << w;
            let keep_going = go(v + 1, a, b, a_score, b_score, image, used, visit);
            *used &= !(1 << w);
            image[v] = usize::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(
        0,
        a,
        b,
        &mut a_score,
        &b_score,
        &mut image,
        &mut used,
        &mut visit,
    );
}

/// Decides isomorphism; on success returns a witness carrying arcs of `a`
/// onto arcs of `b` (the lexicographically first such bijection).
pub fn is_isomorphic(a: &Tournament, b: &Tournament) -> Option<VertexMap> {
    let mut witness = None;
    for_each_isomorphism(a, b, |image| {
        witness = Some(VertexMap::new(image.to_vec()));
        false
    });
    witness
}

pub fn automorphism_count(t: &Tournament) -> usize {
    let mut count = 0;
    for_each_isomorphism(t, t, |_| {
        count += 1;
        true
    });
    count
}

/// All automorphisms of `t`, in lexicographic order of their images.
pub fn automorphisms(t: &Tournament) -> Vec<VertexMap> {
    let mut all = Vec::new();
    for_each_isomorphism(t, t, |image| {
        all.push(VertexMap::new(image.to_vec()));
        true
    });
    all
}

/// `C_n`: vertices `0..2n+1` with `i -> j` iff `(j - i) mod (2n+1)` lies in `1..=n`.
pub fn circular_tournament(n: usize) -> Tournament {
    assert!(n >= 1, "circular tournaments start at n = 1");
    let m = 2 * n + 1;
    Tournament::from_fn(m, |i, j| {
        let d = (j + m - i) % m;
        (1..=n).contains(&d)
    })
}

/// One representative per isomorphism class of `n`-vertex tournaments, each
/// in canonical form, sorted by canonical code.
pub fn enumerate_tournaments(n: usize) -> Result<Vec<Tournament>, TournamentError> {
    enumerate_tournaments_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_tournaments_bounded(
    n: usize,
    bound: usize,
) -> Result<Vec<Tournament>, TournamentError> {
    if n > bound || n > 9 {
        return Err(TournamentError::BoundExceeded { n, bound });
    }
    if n <= 1 {
        return Ok(vec![Tournament::transitive(n)]);
    }
    // Every n-vertex tournament is an (n-1)-vertex one plus a vertex, so
    // extending one representative per smaller class in all 2^(n-1) ways
    // reaches every class.
    let smaller = enumerate_tournaments_bounded(n - 1, bound)?;
    let mut classes: BTreeMap<u64, Tournament> = BTreeMap::new();
    for base in &smaller {
        for mask in 0u64..1 << (n - 1) {
            let t = Tournament::from_fn(n, |i, j| {
                if j < n - 1 {
                    base.arc(i, j)
                } else {
                    // new vertex n-1: bit i set means i -> new
                    mask >> i & 1 == 1
                }
            });
            let code = t.canonical_code();
            classes
                .entry(code)
                .or_insert_with(|| Tournament::from_code(n, code));
        }
    }
    Ok(classes.into_values().collect())
}

/// Membership in the class of local orders: `t` is one iff some word over
/// two parts projects onto it.
pub fn is_local_order(t: &Tournament) -> bool {
    !pstruct::enumerate_extensions(t).representatives.is_empty()
}

/// The class D: a vertex dominating a 3-cycle.
pub fn dominated_cycle() -> Tournament {
    Tournament::from_fn(4, |i, j| match (i, j) {
        (0, _) => true,
        (1, 2) | (2, 3) => true,
        (1, 3) => false,
        _ => unreachable!(),
    })
}
