#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::time::Instant;

use localorder::devlin::{em_code, ColorScope, EmCode, FiniteSubset};
use localorder::trees::{
    satisfies_star, sigma_star, ColoredTree, ColoringSeq, HostTree, Node, StrongSubtree, TreeError,
};

/// Tally of one `σ*` sweep over a host.
#[derive(Debug, Default, Clone)]
pub struct StarSweep {
    /// Pairs where the lift fits in the host and was checked.
    pub pairs: u64,
    /// Pairs whose lift would leave the host; the search must find nothing.
    pub overflow: u64,
    pub failures: Vec<String>,
    pub complete: bool,
}

impl StarSweep {
    pub fn absorb(&mut self, other: StarSweep) {
        self.pairs += other.pairs;
        self.overflow += other.overflow;
        self.failures.extend(other.failures);
        self.complete &= other.complete;
    }
}

/// Every strong subtree `U` of `T` with sequence `sigma`, the lifting
/// property, and `q(U(k)) ⊆ s(k)`: candidates for level `k` are the nodes of
/// `s(k)`, or their children where `sigma(k)` is the top color.
pub fn star_solutions(
    full: &HostTree,
    t: &ColoredTree,
    s: &StrongSubtree,
    sigma: &[u8],
) -> Vec<StrongSubtree> {
    let top = t.top_color();
    let mut host_levels = Vec::with_capacity(sigma.len());
    let mut candidates = Vec::with_capacity(sigma.len());
    for (k, &c) in sigma.iter().enumerate() {
        let lifted = c == top;
        let len = s.levels[k] + usize::from(lifted);
        if len >= t.height() {
            return Vec::new();
        }
        host_levels.push(len);
        candidates.push(if lifted {
            let mut v: Vec<Node> = s.nodes[k]
                .iter()
                .flat_map(|w| [w.child(0), w.child(1)])
                .collect();
            v.sort();
            v
        } else {
            s.nodes[k].clone()
        });
    }
    let mut found = Vec::new();
    let _ = full.try_for_each_in_candidates(&host_levels, &candidates, &mut |u| {
        if satisfies_star(u, t).unwrap() {
            found.push(u.clone());
        }
        ControlFlow::Continue(())
    });
    found
}

/// Checks `σ*` against the search for every strong subtree `s` of `q(T)`
/// and every `sigma` of length `m` with `q(sigma)` equal to the sequence of
/// `s`. Stops early (leaving `complete` false) once `deadline` passes.
pub fn sweep_sigma_star(n: u8, height: usize, m: usize, deadline: Option<Instant>) -> StarSweep {
    let t = ColoredTree::with_top_color(height, n);
    let q = HostTree::q_tree(&t).unwrap();
    let full = HostTree::from_tree(&t).unwrap();
    let mut out = StarSweep {
        complete: true,
        ..StarSweep::default()
    };
    for sigma in ColoringSeq::all(0..n + 1, m) {
        let qs = t.q_sequence(&sigma.0);
        let mut visited = 0u64;
        let flow = q.try_for_each_with_sequence(&qs, &mut |s| {
            visited += 1;
            if visited.is_multiple_of(4096) && deadline.is_some_and(|d| Instant::now() > d) {
                return ControlFlow::Break(());
            }
            let solutions = star_solutions(&full, &t, s, &sigma.0);
            match sigma_star(s, &sigma, &t) {
                Ok(u) => {
                    out.pairs += 1;
                    if solutions.len() != 1 || solutions[0] != u {
                        out.failures.push(format!(
                            "n={n} h={height} sigma={sigma} s={} lift={} search found {}",
                            s.to_json(),
                            u.to_json(),
                            solutions.len()
                        ));
                    }
                }
                Err(TreeError::OutOfHeight { .. }) => {
                    out.overflow += 1;
                    if !solutions.is_empty() {
                        out.failures.push(format!(
                            "n={n} h={height} sigma={sigma} s={}: lift overflowed but search found {}",
                            s.to_json(),
                            solutions.len()
                        ));
                    }
                }
                Err(e) => out.failures.push(format!("n={n} h={height} sigma={sigma}: {e}")),
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            out.complete = false;
            break;
        }
    }
    out
}

/// Every nonempty subset of `nodes` with at most `max` elements.
pub fn small_subsets(nodes: &[Node], max: usize) -> Vec<Vec<Node>> {
    fn go(nodes: &[Node], start: usize, max: usize, cur: &mut Vec<Node>, out: &mut Vec<Vec<Node>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..nodes.len() {
            cur.push(nodes[i]);
            go(nodes, i + 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(nodes, 0, max, &mut Vec::new(), &mut out);
    out
}

pub fn tree_nodes(t: &ColoredTree) -> Vec<Node> {
    let host = HostTree::from_tree(t).unwrap();
    (0..host.height())
        .flat_map(|i| host.level_nodes(i).to_vec())
        .collect()
}

fn string_closure(a: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in a {
        for t in a {
            let l = s.chars().zip(t.chars()).take_while(|(x, y)| x == y).count();
            out.push(s[..l].to_string());
        }
    }
    out.sort();
    out.dedup();
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches for a bijection between the meet closures of `a` and `b`
/// (nodes written as 0/1 strings) that preserves the prefix order, the order
/// of lengths, membership, passing digits and level colors.
pub fn em_bijection_exists(a: &[String], b: &[String], color: &dyn Fn(usize) -> u8) -> bool {
    let (ca, cb) = (string_closure(a), string_closure(b));
    if ca.len() != cb.len() || a.len() != b.len() {
        return false;
    }
    let digit = |s: &str, i: usize| s.as_bytes()[i];
    permutations(ca.len()).iter().any(|p| {
        let f = |i: usize| &cb[p[i]];
        (0..ca.len()).all(|i| {
            let (s, fs) = (&ca[i], f(i));
            a.contains(s) == b.contains(fs)
                && color(s.len()) == color(fs.len())
                && (0..ca.len()).all(|j| {
                    let (t, ft) = (&ca[j], f(j));
                    t.starts_with(s.as_str()) == ft.starts_with(fs.as_str())
                        && s.len().cmp(&t.len()) == fs.len().cmp(&ft.len())
                        && (s.len() >= t.len() || digit(t, s.len()) == digit(ft, fs.len()))
                })
        })
    })
}

/// Tally of the envelope sweep.
#[derive(Debug, Default, Clone)]
pub struct EnvelopeSweep {
    pub subtrees: u64,
    pub checked_classes: u64,
    pub failures: Vec<String>,
    pub complete: bool,
}

/// Image of a node of the full tree of height `v.height()` under the
/// level-preserving isomorphism onto the strong subtree `v`.
fn embed(v: &StrongSubtree, s: &Node) -> Node {
    (0..s.len()).fold(v.nodes[0][0], |cur, j| {
        let target = cur.child(s.digit(j));
        *v.nodes[j + 1]
            .iter()
            .find(|w| target.is_prefix_of(w))
            .expect("strong subtree")
    })
}

/// For every strong subtree `V` of height at most 5 of the `n`-colored tree of
/// height `h`, and every Em-class of subsets with at most `max` elements whose
/// closure colors equal the colors of `V`: exactly one subset of `V` lies in
/// the class, and it is the envelope.
pub fn envelope_sweep(n: u8, h: usize, max: usize, deadline: Option<Instant>) -> EnvelopeSweep {
    use localorder::devlin::{
        closure_sequence, em_code, envelope, meet_closure, ColorScope, EmCode, FiniteSubset,
    };
    use localorder::trees::ColorConvention;
    use std::collections::BTreeMap;

    let t = ColoredTree::cyclic(h, n, ColorConvention::OneBased);
    let mut found: BTreeMap<Vec<u8>, BTreeMap<EmCode, FiniteSubset>> = BTreeMap::new();
    for a in small_subsets(&tree_nodes(&t), max) {
        let a = FiniteSubset::new(a);
        let code = em_code(&a, &t, ColorScope::AllNodes).unwrap();
        found
            .entry(closure_sequence(&a, &t).unwrap())
            .or_default()
            .entry(code)
            .or_insert(a);
    }
    // one representative per class, in code order
    let classes: BTreeMap<Vec<u8>, Vec<(EmCode, FiniteSubset)>> = found
        .into_iter()
        .map(|(k, v)| (k, v.into_iter().collect()))
        .collect();
    let host = HostTree::from_tree(&t).unwrap();
    let mut out = EnvelopeSweep {
        complete: true,
        ..Default::default()
    };
    for m in 1..=h.min(2 * max - 1) {
        // subsets of the full tree of height m whose closure meets every level;
        // their images are exactly the subsets of V with V's color sequence
        let plain = ColoredTree::cyclic(m, 1, ColorConvention::OneBased);
        let spanning: Vec<Vec<Node>> = small_subsets(&tree_nodes(&plain), max)
            .into_iter()
            .filter(|b| {
                let c = meet_closure(&FiniteSubset::new(b.clone())).unwrap();
                c.nodes()
                    .iter()
                    .map(Node::len)
                    .collect::<std::collections::BTreeSet<_>>()
                    .len()
                    == m
            })
            .collect();
        let mut visit = |v: &StrongSubtree| {
            if out.subtrees.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() > d) {
                return ControlFlow::Break(());
            }
            out.subtrees += 1;
            let sigma = localorder::trees::induced_sequence(v, &t).0;
            let mut seen: Vec<(EmCode, FiniteSubset)> = spanning
                .iter()
                .map(|b| {
                    let a = FiniteSubset::new(b.iter().map(|s| embed(v, s)).collect());
                    (em_code(&a, &t, ColorScope::AllNodes).unwrap(), a)
                })
                .collect();
            seen.sort_unstable_by(|x, y| x.0.cmp(&y.0));
            let expected = classes.get(&sigma).map_or(&[][..], Vec::as_slice);
            out.checked_classes += expected.len() as u64;
            if let Some(w) = seen.windows(2).find(|w| w[0].0 == w[1].0) {
                out.failures.push(format!(
                    "V={}: {} and {} are equivalent",
                    v.to_json(),
                    w[0].1,
                    w[1].1
                ));
            }
            if seen.len() != expected.len() || seen.iter().zip(expected).any(|(x, y)| x.0 != y.0) {
                out.failures.push(format!(
                    "V={}: {} classes inside, {} expected",
                    v.to_json(),
                    seen.len(),
                    expected.len()
                ));
            }
            for ((_, copy), (_, rep)) in seen.iter().zip(expected) {
                let env = envelope(v, rep, &t).unwrap();
                if env != *copy {
                    out.failures.push(format!(
                        "V={} A={rep}: envelope {env}, copy {copy}",
                        v.to_json()
                    ));
                }
            }
            ControlFlow::Continue(())
        };
        let flow = host
            .level_choices(m, None)
            .iter()
            .try_for_each(|levels| host.try_for_each_on_levels(levels, &|_, _| true, &mut visit));
        if flow.is_break() {
            out.complete = false;
            break;
        }
    }
    out
}

pub fn strings_up_to(h: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for len in 1..h {
        for x in 0..1u32 << len {
            out.push(
                (0..len)
                    .map(|i| {
                        if x >> (len - 1 - i) & 1 == 1 {
                            '1'
                        } else {
                            '0'
                        }
                    })
                    .collect(),
            );
        }
    }
    out
}

// Strong subtrees of the full binary tree, straight from the definition
// over node sets written as strings.
pub fn brute_force_strong_subtrees(h: usize) -> BTreeSet<Vec<Vec<String>>> {
    let all = strings_up_to(h);
    let mut found = BTreeSet::new();
    for mask in 1u64..1 << all.len() {
        let set: Vec<&String> = (0..all.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| &all[i])
            .collect();
        let lengths: BTreeSet<usize> = set.iter().map(|s| s.len()).collect();
        let levels: Vec<Vec<String>> = lengths
            .iter()
            .map(|&l| {
                let mut v: Vec<String> = set
                    .iter()
                    .filter(|s| s.len() == l)
                    .map(|s| s.to_string())
                    .collect();
                v.sort();
                v
            })
            .collect();
        if levels[0].len() != 1 {
            continue;
        }
        let ok = levels.windows(2).all(|w| {
            let (lo, hi) = (&w[0], &w[1]);
            hi.iter()
                .all(|x| lo.iter().any(|s| x.starts_with(s.as_str())))
                && lo.iter().all(|s| {
                    ["0", "1"].iter().all(|d| {
                        let t = format!("{s}{d}");
                        hi.iter().filter(|x| x.starts_with(t.as_str())).count() == 1
                    })
                })
        });
        if ok {
            found.insert(levels);
        }
    }
    found
}

pub fn as_strings(s: &StrongSubtree) -> Vec<Vec<String>> {
    s.nodes
        .iter()
        .map(|l| {
            let mut v: Vec<String> = l.iter().map(|n| n.to_string()).collect();
            v.sort();
            v
        })
        .collect()
}

/// Subsets of `t` with at most `max` elements, grouped by Em-class.
pub fn em_classes(t: &ColoredTree, max: usize) -> HashMap<EmCode, Vec<FiniteSubset>> {
    let mut out: HashMap<EmCode, Vec<FiniteSubset>> = HashMap::new();
    for a in small_subsets(&tree_nodes(t), max) {
        let a = FiniteSubset::new(a);
        out.entry(em_code(&a, t, ColorScope::AllNodes).unwrap())
            .or_default()
            .push(a);
    }
    out
}

pub fn subset_strings(a: &FiniteSubset) -> Vec<String> {
    a.nodes()
        .iter()
        .map(|v| v.digits().map(|d| char::from(b'0' + d)).collect())
        .collect()
}

/// Equal codes exactly when a witnessing bijection exists, on all subsets of
/// at most `max` nodes of the `n`-colored tree of height `h`: each member
/// against its class representative, and representatives pairwise.
/// Returns the number of classes.
pub fn check_em_congruence(n: u8, h: usize, max: usize) -> Result<usize, String> {
    let t = ColoredTree::cyclic(h, n, localorder::trees::ColorConvention::OneBased);
    let color = |l: usize| t.color(l);
    let classes = em_classes(&t, max);
    let reps: Vec<Vec<String>> = classes.values().map(|c| subset_strings(&c[0])).collect();
    for members in classes.values() {
        let rep = subset_strings(&members[0]);
        if let Some(a) = members[1..]
            .iter()
            .find(|a| !em_bijection_exists(&rep, &subset_strings(a), &color))
        {
            return Err(format!(
                "n={n}: {} and {a} share a code but no bijection",
                members[0]
            ));
        }
    }
    for (i, a) in reps.iter().enumerate() {
        if let Some(b) = reps[i + 1..]
            .iter()
            .find(|b| em_bijection_exists(a, b, &color))
        {
            return Err(format!(
                "n={n}: {a:?} and {b:?} are equivalent but have different codes"
            ));
        }
    }
    Ok(reps.len())
}

/// Strong subtree enumeration and the validity check against the string
/// definition, for every height up to `h` (validity on all node sets of the
/// tallest host).
pub fn check_strong_subtrees(h: usize) -> Result<(), String> {
    use localorder::trees::{enumerate_strong_subtrees, ColorConvention};
    for height in 1..=h {
        let t = ColoredTree::cyclic(height, 1, ColorConvention::ZeroBased);
        let host = HostTree::from_tree(&t).unwrap();
        let mut listed = BTreeSet::new();
        for m in 1..=height {
            for s in enumerate_strong_subtrees(&t, m).unwrap() {
                if !host.is_strong_subtree(&s) || !listed.insert(as_strings(&s)) {
                    return Err(format!("height {height}: bad or repeated {}", s.to_json()));
                }
            }
        }
        if listed != brute_force_strong_subtrees(height) {
            return Err(format!(
                "height {height}: enumeration differs from the definition"
            ));
        }
    }
    let t = ColoredTree::cyclic(h, 1, ColorConvention::ZeroBased);
    let host = HostTree::from_tree(&t).unwrap();
    let strong = brute_force_strong_subtrees(h);
    let all = strings_up_to(h);
    for mask in 1u64..1 << all.len() {
        let set: Vec<&String> = (0..all.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| &all[i])
            .collect();
        let lengths: BTreeSet<usize> = set.iter().map(|s| s.len()).collect();
        let s = StrongSubtree {
            levels: lengths.iter().copied().collect(),
            nodes: lengths
                .iter()
                .map(|&l| {
                    let mut v: Vec<Node> = set
                        .iter()
                        .filter(|s| s.len() == l)
                        .map(|s| s.parse().unwrap())
                        .collect();
                    v.sort();
                    v
                })
                .collect(),
        };
        if host.is_strong_subtree(&s) != strong.contains(&as_strings(&s)) {
            return Err(format!("validity check wrong on {}", s.to_json()));
        }
    }
    Ok(())
}

/// The generated antichain passes its clause checks, and every subset of at
/// most three points is a Devlin type.
pub fn check_antichain(n: u8, count: usize) -> Result<(), String> {
    let model = localorder::devlin::build_antichain(n, count).map_err(|e| e.to_string())?;
    if model.entries.len() != count {
        return Err(format!("{} points generated", model.entries.len()));
    }
    for a in small_subsets(&model.points(), 3) {
        if !localorder::devlin::is_devlin_type(&FiniteSubset::new(a.clone())) {
            return Err(format!("n={n}: {a:?} is not a Devlin type"));
        }
    }
    Ok(())
}
