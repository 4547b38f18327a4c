//! Truncated colored binary trees, strong subtrees, and the `σ*` lift from
//! strong subtrees of `q(T)` back to `T`.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{ControlFlow, Range};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Longest node representable by [`Node`].
pub const MAX_NODE_LEN: usize = 128;
/// Tallest tree materialized level by level.
pub const MAX_HOST_HEIGHT: usize = 24;
const BRANCHING: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid digit {found:?} at position {position}")]
    Parse { position: usize, found: char },
    #[error("nodes longer than {MAX_NODE_LEN} digits are not supported")]
    TooLong,
    #[error("height {0} exceeds the supported maximum {MAX_HOST_HEIGHT}")]
    TooTall(usize),
    #[error("operation needs the zero-based convention with at least two colors")]
    Convention,
    #[error("the root has the top color and no predecessor")]
    RootHasNoPredecessor,
    #[error("node {node} lies outside a tree of height {height}")]
    OutOfHeight { node: Node, height: usize },
    #[error("expected coloring sequence {expected:?}, found {found:?}")]
    SequenceMismatch { expected: Vec<u8>, found: Vec<u8> },
    #[error("no unique node of level {level} lies above {node}")]
    LiftFailed { level: usize, node: Node },
    #[error("color {color} is not used by this tree")]
    ColorOutOfRange { color: u8 },
    #[error("the coloring sequence is empty")]
    EmptySequence,
}

/// An element of `{0,1}^{<128}`; digit `i` is bit `i` of `bits`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Node {
    len: u8,
    bits: u128,
}

impl Node {
    pub const ROOT: Node = Node { len: 0, bits: 0 };

    pub fn from_digits(digits: &[u8]) -> Result<Node, TreeError> {
        if digits.len() > MAX_NODE_LEN {
            return Err(TreeError::TooLong);
        }
        let mut n = Node::ROOT;
        for (position, &d) in digits.iter().enumerate() {
            if d >= BRANCHING {
                return Err(TreeError::Parse {
                    position,
                    found: char::from(b'0' + d.min(9)),
                });
            }
            n = n.child(d);
        }
        Ok(n)
    }

    /// The node whose digits are the `len` low-order bits of `x`, most
    /// significant first. Ranging `x` over `0..2^len` lists a level in order.
    pub fn from_index(len: usize, x: u128) -> Node {
        let mut bits = 0u128;
        for i in 0..len {
            bits |= (x >> (len - 1 - i) & 1) << i;
        }
        Node {
            len: len as u8,
            bits,
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_root(&self) -> bool {
        self.len == 0
    }

    pub fn digit(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        (self.bits >> i & 1) as u8
    }

    pub fn last_digit(&self) -> Option<u8> {
        self.len().checked_sub(1).map(|i| self.digit(i))
    }

    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(|i| self.digit(i))
    }

    /// `self ⌢ d`.
    pub fn child(&self, d: u8) -> Node {
        assert!(self.len() < MAX_NODE_LEN, "node length limit reached");
        Node {
            len: self.len + 1,
            bits: self.bits | (d as u128 & 1) << self.len,
        }
    }

    pub fn parent(&self) -> Option<Node> {
        (!self.is_root()).then(|| self.truncate(self.len() - 1))
    }

    /// The initial segment of length `l` (requires `l <= len`).
    pub fn truncate(&self, l: usize) -> Node {
        debug_assert!(l <= self.len());
        let bits = if l == 128 {
            self.bits
        } else {
            self.bits & ((1u128 << l) - 1)
        };
        Node { len: l as u8, bits }
    }

    /// `self ⊑ other`.
    pub fn is_prefix_of(&self, other: &Node) -> bool {
        self.len <= other.len && other.truncate(self.len()) == *self
    }

    fn common_prefix_len(&self, other: &Node) -> usize {
        let l = self.len.min(other.len) as u32;
        let diff = (self.bits ^ other.bits).trailing_zeros();
        diff.min(l) as usize
    }

    /// The lexicographic order of the tree: `s⌢0 < s < s⌢1`.
    pub fn lex_cmp(&self, other: &Node) -> Ordering {
        let l = self.common_prefix_len(other);
        match (l == self.len(), l == other.len()) {
            (true, true) => Ordering::Equal,
            (true, false) => {
                if other.digit(l) == 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                if self.digit(l) == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (false, false) => self.digit(l).cmp(&other.digit(l)),
        }
    }
}

/// Longest common initial segment.
pub fn meet(s: &Node, t: &Node) -> Node {
    s.truncate(s.common_prefix_len(t))
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl FromStr for Node {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut digits = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => digits.push(0),
                '1' => digits.push(1),
                found => return Err(TreeError::Parse { position, found }),
            }
        }
        Node::from_digits(&digits)
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How level colors are numbered: `k mod n` or `(k mod n) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorConvention {
    ZeroBased,
    OneBased,
}

impl ColorConvention {
    pub fn first(self) -> u8 {
        match self {
            ColorConvention::ZeroBased => 0,
            ColorConvention::OneBased => 1,
        }
    }
}

/// A coloring sequence: one color per level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoringSeq(pub Vec<u8>);

impl ColoringSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every sequence of length `m` over `colors`, in lexicographic order.
    pub fn all(colors: Range<u8>, m: usize) -> Vec<ColoringSeq> {
        let mut out = vec![ColoringSeq(Vec::new())];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|s| {
                    colors.clone().map(move |c| {
                        let mut v = s.0.clone();
                        v.push(c);
                        ColoringSeq(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl FromStr for ColoringSeq {
    type Err = TreeError;

    /// Accepts `"0,1,0"` or `"010"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parts: Vec<&str> = if s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else {
            s.split("").filter(|p| !p.is_empty()).collect()
        };
        parts
            .iter()
            .enumerate()
            .map(|(position, p)| {
                p.parse::<u8>().map_err(|_| TreeError::Parse {
                    position,
                    found: p.chars().next().unwrap_or(' '),
                })
            })
            .collect::<Result<_, _>>()
            .map(ColoringSeq)
    }
}

impl fmt::Display for ColoringSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// The binary tree truncated to `height` levels, with a color per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredTree {
    height: usize,
    n_colors: u8,
    convention: ColorConvention,
    sigma: Vec<u8>,
}

impl ColoredTree {
    /// Level `i` gets color `i mod n_colors`, shifted by the convention.
    pub fn cyclic(height: usize, n_colors: u8, convention: ColorConvention) -> ColoredTree {
        assert!(n_colors >= 1, "at least one color");
        let sigma = (0..height)
            .map(|i| (i % n_colors as usize) as u8 + convention.first())
            .collect();
        ColoredTree {
            height,
            n_colors,
            convention,
            sigma,
        }
    }

    /// The `q`-setting with colors `0..=n`: `Σ(k) = k mod (n+1)`.
    pub fn with_top_color(height: usize, n: u8) -> ColoredTree {
        ColoredTree::cyclic(height, n + 1, ColorConvention::ZeroBased)
    }

    pub fn with_sequence(
        sigma: Vec<u8>,
        n_colors: u8,
        convention: ColorConvention,
    ) -> Result<ColoredTree, TreeError> {
        let lo = convention.first();
        if let Some(&color) = sigma.iter().find(|&&c| c < lo || c >= lo + n_colors) {
            return Err(TreeError::ColorOutOfRange { color });
        }
        Ok(ColoredTree {
            height: sigma.len(),
            n_colors,
            convention,
            sigma,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_colors(&self) -> u8 {
        self.n_colors
    }

    pub fn convention(&self) -> ColorConvention {
        self.convention
    }

    pub fn sigma(&self) -> &[u8] {
        &self.sigma
    }

    pub fn color(&self, level: usize) -> u8 {
        self.sigma[level]
    }

    /// The largest color, `n` in the `q` setting.
    pub fn top_color(&self) -> u8 {
        self.convention.first() + self.n_colors - 1
    }

    pub fn contains(&self, v: &Node) -> bool {
        v.len() < self.height
    }

    /// Replaces every top color by the one below it.
    pub fn q_sequence(&self, sigma: &[u8]) -> Vec<u8> {
        let top = self.top_color();
        sigma
            .iter()
            .map(|&c| if c == top { top - 1 } else { c })
            .collect()
    }

    fn require_q_setting(&self) -> Result<u8, TreeError> {
        if self.convention != ColorConvention::ZeroBased || self.n_colors < 2 {
            return Err(TreeError::Convention);
        }
        Ok(self.top_color())
    }
}

/// A strong subtree: node lists per level, each list inside one tree level
/// (`levels` holds those lengths) and sorted in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrongSubtree {
    pub levels: Vec<usize>,
    pub nodes: Vec<Vec<Node>>,
}

impl StrongSubtree {
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn root(&self) -> Option<Node> {
        self.nodes.first().and_then(|l| l.first()).copied()
    }

    pub fn level(&self, k: usize) -> &[Node] {
        &self.nodes[k]
    }

    pub fn all_nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().flatten()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("subtrees serialize")
    }
}

/// Colors of the tree levels occupied by `s`, in order.
pub fn induced_sequence(s: &StrongSubtree, t: &ColoredTree) -> ColoringSeq {
    ColoringSeq(s.levels.iter().map(|&l| t.color(l)).collect())
}

/// A finite tree given level by level, for enumerating strong subtrees:
/// the binary tree itself, `q(T)`, or a strong subtree taken as a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostTree {
    lengths: Vec<usize>,
    colors: Vec<u8>,
    nodes: Vec<Vec<Node>>,
}

impl HostTree {
    fn full_levels(t: &ColoredTree, keep: impl Fn(usize) -> bool) -> Result<HostTree, TreeError> {
        if t.height > MAX_HOST_HEIGHT {
            return Err(TreeError::TooTall(t.height));
        }
        let lengths: Vec<usize> = (0..t.height).filter(|&l| keep(l)).collect();
        let nodes = lengths
            .iter()
            .map(|&l| (0..1u128 << l).map(|x| Node::from_index(l, x)).collect())
            .collect();
        Ok(HostTree {
            colors: lengths.iter().map(|&l| t.color(l)).collect(),
            lengths,
            nodes,
        })
    }

    pub fn from_tree(t: &ColoredTree) -> Result<HostTree, TreeError> {
        HostTree::full_levels(t, |_| true)
    }

    /// `q(T)`: the tree without its top-color levels, ordered as in `T`.
    pub fn q_tree(t: &ColoredTree) -> Result<HostTree, TreeError> {
        let top = t.require_q_setting()?;
        HostTree::full_levels(t, |l| t.color(l) != top)
    }

    /// `s` viewed as a tree; its strong subtrees are the strong subtrees of
    /// the ambient tree that lie inside `s`.
    pub fn from_subtree(s: &StrongSubtree, t: &ColoredTree) -> HostTree {
        HostTree {
            lengths: s.levels.clone(),
            colors: induced_sequence(s, t).0,
            nodes: s.nodes.clone(),
        }
    }

    pub fn height(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn level_nodes(&self, i: usize) -> &[Node] {
        &self.nodes[i]
    }

    pub fn level_of_length(&self, len: usize) -> Option<usize> {
        self.lengths.binary_search(&len).ok()
    }

    /// Nodes of host level `b` above `s` (a contiguous run).
    pub fn above(&self, b: usize, s: &Node) -> &[Node] {
        above_in(&self.nodes[b], s)
    }

    /// Immediate successors of a node at host level `a`.
    pub fn successors(&self, a: usize, s: &Node) -> &[Node] {
        if a + 1 >= self.height() {
            &[]
        } else {
            self.above(a + 1, s)
        }
    }

    /// Visits every strong subtree on the host levels `host_levels` whose
    /// `k`-th level avoids nodes rejected by `allowed(k, node)`.
    pub fn for_each_on_levels(
        &self,
        host_levels: &[usize],
        allowed: &dyn Fn(usize, &Node) -> bool,
        visit: &mut dyn FnMut(&StrongSubtree),
    ) {
        let _ = self.try_for_each_on_levels(host_levels, allowed, &mut |s| {
            visit(s);
            ControlFlow::Continue(())
        });
    }

    /// As [`for_each_on_levels`](Self::for_each_on_levels), stopping as soon
    /// as `visit` breaks.
    pub fn try_for_each_on_levels(
        &self,
        host_levels: &[usize],
        allowed: &dyn Fn(usize, &Node) -> bool,
        visit: &mut dyn FnMut(&StrongSubtree) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(&first) = host_levels.first() else {
            return ControlFlow::Continue(());
        };
        let roots: Vec<Node> = self.nodes[first]
            .iter()
            .filter(|r| allowed(0, r))
            .copied()
            .collect();
        let choices = |k: usize, t: &Node| -> Cow<'_, [Node]> {
            let above = self.above(host_levels[k], t);
            if above.iter().all(|w| allowed(k, w)) {
                Cow::Borrowed(above)
            } else {
                Cow::Owned(above.iter().filter(|w| allowed(k, w)).copied().collect())
            }
        };
        self.run(host_levels, &roots, &choices, visit)
    }

    /// Strong subtrees on `host_levels` whose `k`-th level is drawn from
    /// `candidates[k]` (sorted, at the length of host level `host_levels[k]`).
    /// Immediate successors are still those of the host.
    pub fn try_for_each_in_candidates(
        &self,
        host_levels: &[usize],
        candidates: &[Vec<Node>],
        visit: &mut dyn FnMut(&StrongSubtree) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if host_levels.is_empty() {
            return ControlFlow::Continue(());
        }
        debug_assert_eq!(host_levels.len(), candidates.len());
        let choices = |k: usize, t: &Node| Cow::Borrowed(above_in(&candidates[k], t));
        self.run(host_levels, &candidates[0], &choices, visit)
    }

    fn run<'a>(
        &self,
        host_levels: &[usize],
        roots: &[Node],
        choices: &dyn Fn(usize, &Node) -> Cow<'a, [Node]>,
        visit: &mut dyn FnMut(&StrongSubtree) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        debug_assert!(host_levels.windows(2).all(|w| w[0] < w[1]));
        let mut cur = StrongSubtree {
            levels: host_levels.iter().map(|&i| self.lengths[i]).collect(),
            nodes: Vec::with_capacity(host_levels.len()),
        };
        for r in roots {
            cur.nodes.push(vec![*r]);
            self.extend(host_levels, &mut cur, choices, visit)?;
            cur.nodes.pop();
        }
        ControlFlow::Continue(())
    }

    fn extend<'a>(
        &self,
        host_levels: &[usize],
        cur: &mut StrongSubtree,
        choices: &dyn Fn(usize, &Node) -> Cow<'a, [Node]>,
        visit: &mut dyn FnMut(&StrongSubtree) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let j = cur.nodes.len() - 1;
        if j + 1 == host_levels.len() {
            return visit(cur);
        }
        // one slot per immediate successor of each current node
        let mut slots: Vec<Cow<'a, [Node]>> = Vec::new();
        for s in &cur.nodes[j] {
            for t in self.successors(host_levels[j], s) {
                let c = choices(j + 1, t);
                if c.is_empty() {
                    return ControlFlow::Continue(());
                }
                slots.push(c);
            }
        }
        if slots.is_empty() {
            return ControlFlow::Continue(());
        }
        let mut pick = vec![0usize; slots.len()];
        loop {
            cur.nodes
                .push(slots.iter().zip(&pick).map(|(c, &i)| c[i]).collect());
            let flow = self.extend(host_levels, cur, choices, visit);
            cur.nodes.pop();
            flow?;
            let mut i = slots.len();
            loop {
                if i == 0 {
                    return ControlFlow::Continue(());
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < slots[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }

    /// Increasing `m`-tuples of host levels, optionally matching a color sequence.
    pub fn level_choices(&self, m: usize, colors: Option<&[u8]>) -> Vec<Vec<usize>> {
        fn go(
            host: &HostTree,
            m: usize,
            colors: Option<&[u8]>,
            start: usize,
            acc: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if acc.len() == m {
                out.push(acc.clone());
                return;
            }
            for i in start..host.height() {
                if colors.is_some_and(|c| c[acc.len()] != host.colors[i]) {
                    continue;
                }
                acc.push(i);
                go(host, m, colors, i + 1, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if m > 0 {
            go(self, m, colors, 0, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn for_each_strong_subtree(&self, m: usize, visit: &mut dyn FnMut(&StrongSubtree)) {
        for levels in self.level_choices(m, None) {
            self.for_each_on_levels(&levels, &|_, _| true, visit);
        }
    }

    /// Strong subtrees whose induced coloring sequence is `sigma`. The empty
    /// sequence has none: a strong subtree always has a root.
    pub fn for_each_with_sequence(&self, sigma: &[u8], visit: &mut dyn FnMut(&StrongSubtree)) {
        for levels in self.level_choices(sigma.len(), Some(sigma)) {
            self.for_each_on_levels(&levels, &|_, _| true, visit);
        }
    }

    pub fn try_for_each_with_sequence(
        &self,
        sigma: &[u8],
        visit: &mut dyn FnMut(&StrongSubtree) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for levels in self.level_choices(sigma.len(), Some(sigma)) {
            self.try_for_each_on_levels(&levels, &|_, _| true, visit)?;
        }
        ControlFlow::Continue(())
    }

    pub fn strong_subtrees(&self, m: usize) -> Vec<StrongSubtree> {
        let mut out = Vec::new();
        self.for_each_strong_subtree(m, &mut |s| out.push(s.clone()));
        out
    }

    pub fn count_strong_subtrees(&self, m: usize) -> u64 {
        let mut n = 0;
        self.for_each_strong_subtree(m, &mut |_| n += 1);
        n
    }

    /// Checks the defining clauses directly: one root, each level inside a
    /// host level, every node above a node of the previous level, and for
    /// each non-maximal node exactly one successor above each of its
    /// immediate host successors.
    pub fn is_strong_subtree(&self, s: &StrongSubtree) -> bool {
        if s.nodes.len() != s.levels.len() || s.nodes.first().is_none_or(|r| r.len() != 1) {
            return false;
        }
        let Some(host_levels) = s
            .levels
            .iter()
            .map(|&l| self.level_of_length(l))
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        if !host_levels.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        for (k, level) in s.nodes.iter().enumerate() {
            let host = &self.nodes[host_levels[k]];
            let mut sorted = level.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != level.len() || !level.iter().all(|v| host.binary_search(v).is_ok()) {
                return false;
            }
        }
        for (pair, &host_level) in s.nodes.windows(2).zip(&host_levels) {
            let (lower, upper) = (&pair[0], &pair[1]);
            if !upper
                .iter()
                .all(|w| lower.iter().any(|v| v.is_prefix_of(w)))
            {
                return false;
            }
            for v in lower {
                for t in self.successors(host_level, v) {
                    if upper.iter().filter(|w| t.is_prefix_of(w)).count() != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The run of a sorted, equal-length node list lying above `s`.
pub fn above_in<'a>(level: &'a [Node], s: &Node) -> &'a [Node] {
    let l = s.len();
    let lo = level.partition_point(|w| w.truncate(l).lex_cmp(s) == Ordering::Less);
    let hi = lo + level[lo..].partition_point(|w| w.truncate(l) == *s);
    &level[lo..hi]
}

pub fn enumerate_strong_subtrees(
    t: &ColoredTree,
    m: usize,
) -> Result<Vec<StrongSubtree>, TreeError> {
    Ok(HostTree::from_tree(t)?.strong_subtrees(m))
}

pub fn filter_by_sequence(
    t: &ColoredTree,
    sigma: &ColoringSeq,
) -> Result<Vec<StrongSubtree>, TreeError> {
    let lo = t.convention.first();
    if let Some(&color) = sigma.0.iter().find(|&&c| c < lo || c >= lo + t.n_colors) {
        return Err(TreeError::ColorOutOfRange { color });
    }
    let host = HostTree::from_tree(t)?;
    let mut out = Vec::new();
    host.for_each_with_sequence(&sigma.0, &mut |s| out.push(s.clone()));
    Ok(out)
}

/// Sends a top-color node to its immediate predecessor and fixes the rest.
pub fn q_map(t: &ColoredTree, v: &Node) -> Result<Node, TreeError> {
    let top = t.require_q_setting()?;
    if !t.contains(v) {
        return Err(TreeError::OutOfHeight {
            node: *v,
            height: t.height,
        });
    }
    if t.color(v.len()) != top {
        return Ok(*v);
    }
    v.parent().ok_or(TreeError::RootHasNoPredecessor)
}

/// Both clauses of the lifting property:
/// a top-color node is its predecessor followed by 0, and after a node `u`
/// of the color just below the top, each subtree successor of `u` passes
/// through `t⌢0` where `t` is the immediate successor of `u` it extends.
pub fn satisfies_star(u: &StrongSubtree, t: &ColoredTree) -> Result<bool, TreeError> {
    let top = t.require_q_setting()?;
    let below = top - 1;
    for (k, level) in u.nodes.iter().enumerate() {
        let color = t.color(u.levels[k]);
        if color == top && level.iter().any(|v| v.last_digit() != Some(0)) {
            return Ok(false);
        }
        if color == below && k + 1 < u.nodes.len() {
            for v in level {
                let l = v.len();
                for w in u.nodes[k + 1].iter().filter(|w| v.is_prefix_of(w)) {
                    if w.len() < l + 2 || w.digit(l + 1) != 0 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn unique_above(level: &[Node], v: &Node) -> Option<Node> {
    let mut it = level.iter().filter(|w| v.is_prefix_of(w));
    match (it.next(), it.next()) {
        (Some(w), None) => Some(*w),
        _ => None,
    }
}

/// Lifts `s`, a strong subtree of `q(T)` with sequence `q(sigma)`, to the
/// strong subtree of `T` with sequence `sigma` that has the lifting property
/// and whose `k`-th level maps into `s(k)` under `q`.
///
/// Level by level: the root is `root(s)`, or `root(s)⌢0` when `sigma(0)` is
/// the top color. For `u` in level `k` and each immediate successor `v` of
/// `u` in `T`, take the node of `s(k+1)` above `v` (or above `v⌢0` when
/// `sigma(k)` is the color below the top), then append `0` when
/// `sigma(k+1)` is the top color.
pub fn sigma_star(
    s: &StrongSubtree,
    sigma: &ColoringSeq,
    t: &ColoredTree,
) -> Result<StrongSubtree, TreeError> {
    let top = t.require_q_setting()?;
    if sigma.is_empty() {
        return Err(TreeError::EmptySequence);
    }
    let found = induced_sequence(s, t).0;
    let expected = t.q_sequence(&sigma.0);
    if found != expected {
        return Err(TreeError::SequenceMismatch { expected, found });
    }
    let fits = |v: Node| -> Result<Node, TreeError> {
        if t.contains(&v) {
            Ok(v)
        } else {
            Err(TreeError::OutOfHeight {
                node: v,
                height: t.height,
            })
        }
    };
    let lift_top = |k: usize, v: Node| -> Result<Node, TreeError> {
        if sigma.0[k] == top {
            fits(v.child(0))
        } else {
            Ok(v)
        }
    };

    let root = s.root().ok_or(TreeError::EmptySequence)?;
    let mut nodes = vec![vec![lift_top(0, root)?]];
    for k in 0..sigma.len() - 1 {
        let mut next = Vec::with_capacity(2 * nodes[k].len());
        for u in &nodes[k] {
            for d in 0..BRANCHING {
                let v = fits(u.child(d))?;
                let target = if sigma.0[k] == top - 1 {
                    fits(v.child(0))?
                } else {
                    v
                };
                let w = unique_above(&s.nodes[k + 1], &target).ok_or(TreeError::LiftFailed {
                    level: k + 1,
                    node: target,
                })?;
                next.push(lift_top(k + 1, w)?);
            }
        }
        next.sort();
        nodes.push(next);
    }
    Ok(StrongSubtree {
        levels: nodes.iter().map(|l| l[0].len()).collect(),
        nodes,
    })
}

/// Outcome of a finite search for a homogeneous strong subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonochromaticSearch {
    Found {
        subtree: StrongSubtree,
        color: usize,
    },
    /// No candidate of this height works; the infinite statement promises
    /// nothing for truncated trees.
    NotFound { candidates: u64 },
}

/// First strong subtree `S` of `t` (in enumeration order) with induced
/// sequence `target` on whose `sigma`-subtrees `chi` is constant.
pub fn find_monochromatic(
    t: &ColoredTree,
    sigma: &ColoringSeq,
    chi: &dyn Fn(&StrongSubtree) -> usize,
    target: &ColoringSeq,
) -> Result<MonochromaticSearch, TreeError> {
    let host = HostTree::from_tree(t)?;
    let mut candidates = 0u64;
    let mut result = None;
    for levels in host.level_choices(target.len(), Some(&target.0)) {
        host.for_each_on_levels(&levels, &|_, _| true, &mut |s| {
            if result.is_some() {
                return;
            }
            candidates += 1;
            let inner = HostTree::from_subtree(s, t);
            let mut color: Option<usize> = None;
            let mut constant = true;
            inner.for_each_with_sequence(&sigma.0, &mut |v| {
                if constant {
                    let c = chi(v);
                    constant = *color.get_or_insert(c) == c;
                }
            });
            if let (true, Some(c)) = (constant, color) {
                result = Some((s.clone(), c));
            }
        });
        if result.is_some() {
            break;
        }
    }
    Ok(match result {
        Some((subtree, color)) => MonochromaticSearch::Found { subtree, color },
        None => MonochromaticSearch::NotFound { candidates },
    })
}
