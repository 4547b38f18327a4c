//! Embedding types of finite subsets of the colored binary tree: meet
//! closures, canonical codes for Em-equivalence, envelopes inside strong
//! subtrees, Devlin types, and the antichain realizing exactly those types.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::pstruct::PnStructure;
use crate::trees::{
    above_in, induced_sequence, meet, ColorConvention, ColoredTree, Node, StrongSubtree, TreeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DevlinError {
    #[error("the subset is empty")]
    Empty,
    #[error("node {node} lies outside a tree of height {height}")]
    OutOfHeight { node: Node, height: usize },
    #[error("subset has level colors {subset:?} but the subtree has {subtree:?}")]
    SequenceMismatch { subset: Vec<u8>, subtree: Vec<u8> },
    #[error("no unique node of subtree level {level} lies above {node}")]
    NotStrong { level: usize, node: Node },
    #[error("count still changing at height cap {cap} (last count {partial})")]
    CapReached { cap: usize, partial: usize },
    #[error("need at least one part and one element")]
    BadStructure,
    #[error("antichain clause {clause} fails: {detail}")]
    Clause {
        clause: &'static str,
        detail: String,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A finite set of nodes, kept sorted in the lexicographic order of the tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteSubset {
    nodes: Vec<Node>,
}

impl FiniteSubset {
    pub fn new(mut nodes: Vec<Node>) -> FiniteSubset {
        nodes.sort();
        nodes.dedup();
        FiniteSubset { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: &Node) -> bool {
        self.nodes.binary_search(v).is_ok()
    }
}

impl FromStr for FiniteSubset {
    type Err = DevlinError;

    /// Comma- or space-separated 0/1 strings; `-` stands for the root.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let nodes = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| if p == "-" { Ok(Node::ROOT) } else { p.parse() })
            .collect::<Result<Vec<Node>, TreeError>>()?;
        Ok(FiniteSubset::new(nodes))
    }
}

impl fmt::Display for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nodes
            .iter()
            .map(|n| {
                if n.is_root() {
                    "-".to_string()
                } else {
                    n.to_string()
                }
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

type Nodes = SmallVec<[Node; 8]>;

fn closure_of(nodes: &[Node]) -> Nodes {
    let mut out: Nodes = nodes.iter().copied().collect();
    for (i, s) in nodes.iter().enumerate() {
        for t in &nodes[i + 1..] {
            out.push(meet(s, t));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `A^∧`: all meets of pairs from `A` (including `s ∧ s = s`).
pub fn meet_closure(a: &FiniteSubset) -> Result<FiniteSubset, DevlinError> {
    if a.is_empty() {
        return Err(DevlinError::Empty);
    }
    Ok(FiniteSubset {
        nodes: closure_of(&a.nodes).into_vec(),
    })
}

/// Which closure nodes carry their level color in an [`EmCode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorScope {
    /// Every node of `A^∧`, as the equivalence is defined.
    #[default]
    AllNodes,
    /// Only the members of `A`.
    MembersOnly,
}

/// One node of `A^∧` in an [`EmCode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmNode {
    /// Position of the node's length among the distinct lengths of `A^∧`.
    pub rank: u8,
    /// Index of the immediate predecessor within `A^∧`.
    pub parent: Option<u8>,
    /// Bit `j` is the node's digit at the `j`-th closure length (`j < rank`).
    pub digits: u128,
    pub member: bool,
    pub color: Option<u8>,
}

/// Canonical form of an Em-class.
///
/// Nodes are listed by (length rank, passing digits). Two closure nodes of
/// equal length differ at the length of their meet, which is itself a
/// closure length, so this order is total; and every bijection witnessing
/// Em preserves ranks and passing digits, so it preserves the order too.
/// Equal codes therefore mean the index-matching map is a witness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmCode {
    pub levels: u8,
    pub nodes: SmallVec<[EmNode; 8]>,
}

impl EmCode {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn members(&self) -> usize {
        self.nodes.iter().filter(|n| n.member).count()
    }

    /// Stable JSON text, suitable for diffing inventories.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("codes serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct EmNodeJson {
    rank: u8,
    parent: Option<u8>,
    digits: String,
    member: bool,
    color: Option<u8>,
}

#[derive(Serialize, Deserialize)]
struct EmCodeJson {
    levels: u8,
    nodes: Vec<EmNodeJson>,
}

impl Serialize for EmCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmCodeJson {
            levels: self.levels,
            nodes: self
                .nodes
                .iter()
                .map(|n| EmNodeJson {
                    rank: n.rank,
                    parent: n.parent,
                    digits: (0..n.rank)
                        .map(|j| if n.digits >> j & 1 == 1 { '1' } else { '0' })
                        .collect(),
                    member: n.member,
                    color: n.color,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = EmCodeJson::deserialize(d)?;
        let nodes = raw
            .nodes
            .into_iter()
            .map(|n| {
                let digits =
                    n.digits
                        .chars()
                        .enumerate()
                        .try_fold(0u128, |acc, (j, c)| match c {
                            '0' => Ok(acc),
                            '1' => Ok(acc | 1 << j),
                            _ => Err(serde::de::Error::custom("digits must be 0 or 1")),
                        })?;
                Ok(EmNode {
                    rank: n.rank,
                    parent: n.parent,
                    digits,
                    member: n.member,
                    color: n.color,
                })
            })
            .collect::<Result<_, D::Error>>()?;
        Ok(EmCode {
            levels: raw.levels,
            nodes,
        })
    }
}

fn check_height(nodes: &[Node], t: &ColoredTree) -> Result<(), DevlinError> {
    match nodes.iter().find(|v| !t.contains(v)) {
        Some(v) => Err(DevlinError::OutOfHeight {
            node: *v,
            height: t.height(),
        }),
        None => Ok(()),
    }
}

fn closure_lengths(closure: &[Node]) -> SmallVec<[usize; 8]> {
    let mut lengths: SmallVec<[usize; 8]> = closure.iter().map(Node::len).collect();
    lengths.sort_unstable();
    lengths.dedup();
    lengths
}

pub fn em_code(
    a: &FiniteSubset,
    t: &ColoredTree,
    scope: ColorScope,
) -> Result<EmCode, DevlinError> {
    if a.is_empty() {
        return Err(DevlinError::Empty);
    }
    check_height(&a.nodes, t)?;
    Ok(code_of(&a.nodes, t, scope))
}

/// [`em_code`] on a sorted, duplicate-free, in-height node list.
pub(crate) fn code_of(members: &[Node], t: &ColoredTree, scope: ColorScope) -> EmCode {
    let closure = closure_of(members);
    let lengths = closure_lengths(&closure);
    let mut keyed: SmallVec<[(u8, u128, Node); 8]> = closure
        .iter()
        .map(|v| {
            let rank = lengths.binary_search(&v.len()).expect("closure length") as u8;
            let digits =
                (0..rank as usize).fold(0u128, |acc, j| acc | (v.digit(lengths[j]) as u128) << j);
            (rank, digits, *v)
        })
        .collect();
    keyed.sort_unstable_by_key(|&(r, d, _)| (r, d));
    let nodes = keyed
        .iter()
        .map(|&(rank, digits, v)| {
            let parent = keyed
                .iter()
                .enumerate()
                .filter(|(_, &(_, _, p))| p.len() < v.len() && p.is_prefix_of(&v))
                .max_by_key(|(_, &(_, _, p))| p.len())
                .map(|(i, _)| i as u8);
            let member = members.binary_search(&v).is_ok();
            let color = match scope {
                ColorScope::AllNodes => Some(t.color(v.len())),
                ColorScope::MembersOnly => member.then(|| t.color(v.len())),
            };
            EmNode {
                rank,
                parent,
                digits,
                member,
                color,
            }
        })
        .collect();
    EmCode {
        levels: lengths.len() as u8,
        nodes,
    }
}

/// Colors of the distinct levels of `A^∧`, in increasing order.
pub fn closure_sequence(a: &FiniteSubset, t: &ColoredTree) -> Result<Vec<u8>, DevlinError> {
    let closure = meet_closure(a)?;
    check_height(&closure.nodes, t)?;
    Ok(closure_lengths(&closure.nodes)
        .iter()
        .map(|&l| t.color(l))
        .collect())
}

/// The copy of `a` inside `v` with the same embedding type: each node of `a`
/// is followed from the root of `v`, taking at the `j`-th level of `v` the
/// branch given by its digit at the `j`-th length of `A^∧`.
pub fn envelope(
    v: &StrongSubtree,
    a: &FiniteSubset,
    t: &ColoredTree,
) -> Result<FiniteSubset, DevlinError> {
    if a.is_empty() {
        return Err(DevlinError::Empty);
    }
    let closure = closure_of(&a.nodes);
    check_height(&closure, t)?;
    let lengths = closure_lengths(&closure);
    let matches = lengths.len() == v.levels.len()
        && lengths
            .iter()
            .zip(&v.levels)
            .all(|(&l, &k)| t.color(l) == t.color(k));
    if !matches {
        return Err(DevlinError::SequenceMismatch {
            subset: lengths.iter().map(|&l| t.color(l)).collect(),
            subtree: induced_sequence(v, t).0,
        });
    }
    let root = v.root().ok_or(DevlinError::Empty)?;
    let image = a
        .nodes
        .iter()
        .map(|s| {
            let rank = lengths.binary_search(&s.len()).expect("member length");
            (0..rank).try_fold(root, |cur, j| {
                let target = cur.child(s.digit(lengths[j]));
                match above_in(&v.nodes[j + 1], &target) {
                    [w] => Ok(*w),
                    _ => Err(DevlinError::NotStrong {
                        level: j + 1,
                        node: target,
                    }),
                }
            })
        })
        .collect::<Result<Vec<Node>, DevlinError>>()?;
    Ok(FiniteSubset::new(image))
}

fn devlin_nodes(members: &[Node]) -> bool {
    let closure = closure_of(members);
    // the members are exactly the maximal nodes of the closure
    let terminal = |s: &Node| {
        !closure
            .iter()
            .any(|t| t.len() > s.len() && s.is_prefix_of(t))
    };
    let terminals = closure.iter().filter(|s| terminal(s)).count();
    if terminals != members.len() || !members.iter().all(terminal) {
        return false;
    }
    let lengths = closure_lengths(&closure);
    if lengths.len() != closure.len() {
        return false;
    }
    closure.iter().all(|s| {
        closure
            .iter()
            .all(|t| t.len() <= s.len() || s.is_prefix_of(t) || t.digit(s.len()) == 0)
    })
}

/// The three Devlin clauses: `A` is the set of terminal nodes of `A^∧`,
/// the nodes of `A^∧` have pairwise distinct lengths, and every digit of a
/// node of `A^∧` taken at the length of a shorter node of `A^∧` not below
/// it is `0`.
pub fn is_devlin_type(a: &FiniteSubset) -> bool {
    !a.is_empty() && devlin_nodes(&a.nodes)
}

/// Devlin types realized by `x` in the tree of height `height` colored
/// `(i mod n) + 1`: subsets whose members, in lexicographic order, have the
/// level colors of `x`'s parts.
///
/// Types are compared with member colors only. Interior meet nodes can sit
/// at levels of either color without changing the structure they induce, and
/// counting their colors as well overshoots the tangent numbers (for two
/// parts and two elements it gives 4 rather than 2).
pub fn devlin_inventory(x: &PnStructure, height: usize) -> Result<BTreeSet<EmCode>, DevlinError> {
    if x.is_empty() {
        return Err(DevlinError::BadStructure);
    }
    let t = ColoredTree::cyclic(height, x.n_parts(), ColorConvention::OneBased);
    let host = crate::trees::HostTree::from_tree(&t)?;
    let mut all: Vec<Node> = (0..host.height())
        .flat_map(|i| host.level_nodes(i).iter().copied())
        .collect();
    all.sort();
    let mut found = HashSet::new();
    let mut chosen: Vec<Node> = Vec::with_capacity(x.len());
    search(&all, 0, x, &t, &mut chosen, &mut found);
    Ok(found.into_iter().collect())
}

fn search(
    all: &[Node],
    start: usize,
    x: &PnStructure,
    t: &ColoredTree,
    chosen: &mut Vec<Node>,
    found: &mut HashSet<EmCode>,
) {
    if chosen.len() == x.len() {
        found.insert(code_of(chosen, t, ColorScope::MembersOnly));
        return;
    }
    let part = x.part(chosen.len());
    for (i, v) in all.iter().enumerate().skip(start) {
        if t.color(v.len()) != part {
            continue;
        }
        chosen.push(*v);
        // every clause survives passing to subsets, so prune early
        if devlin_nodes(chosen) {
            search(all, i + 1, x, t, chosen, found);
        }
        chosen.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DevlinCount {
    pub count: usize,
    pub height: usize,
    /// `(height, count)` for every height tried.
    pub history: Vec<(usize, usize)>,
}

/// Default cap on the host height.
pub fn default_height_cap(x: &PnStructure) -> usize {
    4 * x.len() * x.n_parts() as usize + 4
}

/// Number of Devlin types realized by `x`, raising the height until the count
/// is nonzero and unchanged over a full period of `n` colors, up to `cap`.
pub fn count_devlin_types(x: &PnStructure, cap: usize) -> Result<DevlinCount, DevlinError> {
    if x.is_empty() || x.n_parts() == 0 {
        return Err(DevlinError::BadStructure);
    }
    let period = x.n_parts() as usize;
    let mut history: Vec<(usize, usize)> = Vec::new();
    for h in 1..=cap {
        let c = devlin_inventory(x, h)?.len();
        history.push((h, c));
        let stable = c > 0
            && history.len() > period
            && history[history.len() - 1 - period..]
                .iter()
                .all(|&(_, k)| k == c);
        if stable {
            return Ok(DevlinCount {
                count: c,
                height: h,
                history,
            });
        }
    }
    Err(DevlinError::CapReached {
        cap,
        partial: history.last().map_or(0, |&(_, c)| c),
    })
}

/// One generated pair `(w_f, x_f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntichainEntry {
    pub address: Node,
    pub w: Node,
    pub x: Node,
    pub color: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntichainModel {
    pub n_colors: u8,
    pub entries: Vec<AntichainEntry>,
}

/// Addresses `∅, 0, 1, 00, 01, …`: by length, then left to right.
fn breadth_addresses(count: usize) -> impl Iterator<Item = Node> {
    (0usize..)
        .flat_map(|len| (0..1u128 << len).map(move |x| Node::from_index(len, x)))
        .take(count)
}

/// The first `count` nodes `w_f` of the meet-closed tree `W` and the points
/// `x_f = w_f⌢01⌢0^i` with `i = |f| mod n`.
///
/// `W` is laid out greedily: `w_∅ = ∅`, and each later `w_f` sits at the
/// first level that is a multiple of `n` and lies above every point placed
/// so far, reached from its `W`-parent by the branch digit and then zeros.
/// All `W` clauses are checked before returning.
pub fn build_antichain(n: u8, count: usize) -> Result<AntichainModel, DevlinError> {
    if n == 0 || count == 0 {
        return Err(DevlinError::BadStructure);
    }
    let step = n as usize;
    let t_colors = |len: usize| (len % step) as u8 + 1;
    let mut entries: Vec<AntichainEntry> = Vec::with_capacity(count);
    let mut top = 0usize;
    for f in breadth_addresses(count) {
        let w = match f.parent() {
            None => Node::ROOT,
            Some(p) => {
                let wp = entries
                    .iter()
                    .find(|e| e.address == p)
                    .expect("parents come first")
                    .w;
                let len = (top + 1).div_ceil(step) * step;
                let mut w = wp.child(f.last_digit().expect("non-root"));
                while w.len() < len {
                    w = w.child(0);
                }
                w
            }
        };
        let mut x = w.child(0).child(1);
        for _ in 0..f.len() % step {
            x = x.child(0);
        }
        top = top.max(x.len());
        entries.push(AntichainEntry {
            address: f,
            w,
            x,
            color: t_colors(x.len()),
        });
    }
    let model = AntichainModel {
        n_colors: n,
        entries,
    };
    model.check_clauses()?;
    Ok(model)
}

impl AntichainModel {
    pub fn points(&self) -> Vec<Node> {
        self.entries.iter().map(|e| e.x).collect()
    }

    fn fail(clause: &'static str, detail: String) -> Result<(), DevlinError> {
        Err(DevlinError::Clause { clause, detail })
    }

    /// The `W` clauses on the generated prefix, plus the antichain property
    /// and the shape of each `x_f`.
    pub fn check_clauses(&self) -> Result<(), DevlinError> {
        let n = self.n_colors as usize;
        let ws: Vec<Node> = self.entries.iter().map(|e| e.w).collect();
        if ws.first() != Some(&Node::ROOT) {
            return Self::fail("root", "w_∅ is not the root".into());
        }
        // at most one W node per level, and only on levels that are multiples of n
        let mut lengths = BTreeSet::new();
        for w in &ws {
            if w.len() % n != 0 || !lengths.insert(w.len()) {
                return Self::fail("levels", format!("w = {w}"));
            }
        }
        // lengths grow along the breadth-first order of addresses
        if !ws.windows(2).all(|p| p[0].len() < p[1].len()) {
            return Self::fail("growth", "lengths do not increase".into());
        }
        for (a, ea) in self.entries.iter().enumerate() {
            for eb in &self.entries[a + 1..] {
                if ea.address.cmp(&eb.address) != ea.w.cmp(&eb.w) {
                    return Self::fail("order", format!("{} vs {}", ea.address, eb.address));
                }
                if ea.address.is_prefix_of(&eb.address) != ea.w.is_prefix_of(&eb.w) {
                    return Self::fail("tree", format!("{} vs {}", ea.address, eb.address));
                }
                let m = meet(&ea.w, &eb.w);
                if !ws.contains(&m)
                    && self
                        .entries
                        .iter()
                        .any(|e| e.address == meet(&ea.address, &eb.address))
                {
                    return Self::fail("meets", format!("{} ∧ {}", ea.w, eb.w));
                }
            }
        }
        // off-W nodes below a W node are followed by 0
        for w in &ws {
            for l in 0..w.len() {
                let u = w.truncate(l);
                if !ws.contains(&u) && w.digit(l) != 0 {
                    return Self::fail("zeros", format!("{u} below {w}"));
                }
            }
        }
        for e in &self.entries {
            let i = e.address.len() % n;
            let tail: Vec<u8> = e.x.digits().skip(e.w.len()).collect();
            let mut expect = vec![0, 1];
            expect.extend(std::iter::repeat_n(0, i));
            if !e.w.is_prefix_of(&e.x) || tail != expect {
                return Self::fail("point", format!("x = {} for w = {}", e.x, e.w));
            }
        }
        let xs = self.points();
        for (i, a) in xs.iter().enumerate() {
            if xs[i + 1..]
                .iter()
                .any(|b| a.is_prefix_of(b) || b.is_prefix_of(a))
            {
                return Self::fail("antichain", format!("{a}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> FiniteSubset {
        s.parse().unwrap()
    }

    fn plain(h: usize) -> ColoredTree {
        ColoredTree::cyclic(h, 1, ColorConvention::OneBased)
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            meet_closure(&set("0,100,1010")).unwrap(),
            set("-,0,10,100,1010")
        );
        assert_eq!(meet_closure(&set("0110")).unwrap(), set("0110"));
        assert_eq!(meet_closure(&set("0,01,011")).unwrap(), set("0,01,011"));
        assert_eq!(
            meet_closure(&FiniteSubset::new(vec![])),
            Err(DevlinError::Empty)
        );
    }

    #[test]
    fn code_examples() {
        let t = plain(8);
        let a = set("0,100,1010");
        let prefixed = FiniteSubset::new(
            a.nodes()
                .iter()
                .map(|v| format!("11{v}").parse().unwrap())
                .collect(),
        );
        assert_eq!(
            em_code(&a, &t, ColorScope::AllNodes),
            em_code(&prefixed, &t, ColorScope::AllNodes)
        );
        assert_eq!(
            em_code(&set("0"), &t, ColorScope::AllNodes),
            em_code(&set("1"), &t, ColorScope::AllNodes)
        );
        assert_eq!(
            em_code(&set("0,1"), &t, ColorScope::AllNodes),
            em_code(&set("00,01"), &t, ColorScope::AllNodes)
        );
        let t2 = ColoredTree::cyclic(8, 2, ColorConvention::OneBased);
        assert_ne!(
            em_code(&set("0,1"), &t2, ColorScope::AllNodes),
            em_code(&set("00,01"), &t2, ColorScope::AllNodes)
        );
        assert_ne!(
            em_code(&set("0,1"), &t, ColorScope::AllNodes),
            em_code(&set("00,1"), &t, ColorScope::AllNodes)
        );
        assert!(matches!(
            em_code(&set("0000"), &plain(3), ColorScope::AllNodes),
            Err(DevlinError::OutOfHeight { .. })
        ));
    }

    #[test]
    fn code_json_round_trips() {
        let t = ColoredTree::cyclic(8, 2, ColorConvention::OneBased);
        let c = em_code(&set("0,100,1010"), &t, ColorScope::AllNodes).unwrap();
        let text = c.to_json();
        assert!(text.starts_with(
            r#"{"levels":5,"nodes":[{"rank":0,"parent":null,"digits":"","member":false,"color":1}"#
        ));
        let back: EmCode = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn devlin_examples() {
        assert!(is_devlin_type(&set("0,100,1010")));
        assert!(!is_devlin_type(&set("0,1")));
        assert!(!is_devlin_type(&set("0,01,1")));
        assert!(is_devlin_type(&set("01,1000")));
        assert!(!is_devlin_type(&set("01,1010")));
        assert!(is_devlin_type(&set("0110")));
    }

    #[test]
    fn envelope_of_the_whole_tree_is_identity() {
        let t = plain(5);
        let host = crate::trees::HostTree::from_tree(&t).unwrap();
        let a = set("0,100,1010");
        let full = host.strong_subtrees(5).pop().unwrap();
        // closure lengths 0,1,2,3,4 are exactly the levels of the full tree
        assert_eq!(envelope(&full, &a, &t).unwrap(), a);
        let short = host.strong_subtrees(2).pop().unwrap();
        assert!(matches!(
            envelope(&short, &a, &t),
            Err(DevlinError::SequenceMismatch { .. })
        ));
    }

    #[test]
    fn small_counts() {
        let p = |w: &str, n: u8| PnStructure::parse_word(w, Some(n)).unwrap();
        let count = |x: &PnStructure| count_devlin_types(x, default_height_cap(x)).unwrap().count;
        assert_eq!(count(&p("1", 1)), 1);
        assert_eq!(count(&p("11", 1)), 2);
        assert_eq!(count(&p("2", 2)), 1);
        assert_eq!(count(&p("21", 2)), 2);
        assert!(matches!(
            count_devlin_types(&p("11", 1), 2),
            Err(DevlinError::CapReached { cap: 2, .. })
        ));
    }

    #[test]
    fn antichain_first_points() {
        for n in 1..=3 {
            let m = build_antichain(n, 15).unwrap();
            assert_eq!(m.entries[0].x, "01".parse().unwrap());
            let xs = m.points();
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    assert!(is_devlin_type(&FiniteSubset::new(vec![xs[i], xs[j]])));
                }
            }
        }
    }
}
