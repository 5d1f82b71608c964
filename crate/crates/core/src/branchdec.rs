//! Branch decompositions of the column matroid and the rooted module family
//! derived from them.
//!
//! A branch decomposition is an unrooted tree whose internal nodes have
//! degree 3 and whose leaves are in bijection with the columns. Each edge
//! splits the columns in two; the width of the decomposition is the largest
//! connectivity `ρ` over those splits. Rooting the tree at an edge turns every
//! node into a column subset with `ρ <= width`, i.e. a `(width − 1)`-module.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::colset::ColSet;
use crate::error::{Error, Result};
use crate::kmodule::{ModuleInterface, PolyhedronSpec};
use crate::matroid::LinearMatroid;

/// Child reference in a rooted merge list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    /// A column index.
    Leaf(usize),
    /// Index of an earlier merge.
    Merge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Minimum width, exact; exponential in the number of columns.
    Exhaustive,
    /// Agglomerative heuristic; width is not guaranteed minimal.
    Greedy,
}

/// Unrooted branch decomposition `(T, τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomposition {
    n: usize,
    adj: Vec<Vec<usize>>,
    /// `τ`: tree node -> column, for leaves.
    leaf_of: Vec<Option<usize>>,
}

impl BranchDecomposition {
    /// Builds the tree from a rooted merge list. Children must refer to
    /// earlier merges; every column and every non-root merge is used exactly
    /// once. The root node (degree 2) is suppressed.
    pub fn from_merges(n: usize, merges: &[(Child, Child)], root: Option<Child>) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedDecomposition(m));
        let mut leaf_uses = vec![0usize; n];
        let mut merge_uses = vec![0usize; merges.len()];
        for (t, pair) in merges.iter().enumerate() {
            for c in [pair.0, pair.1] {
                match c {
                    Child::Leaf(i) if i < n => leaf_uses[i] += 1,
                    Child::Leaf(i) => return bad(format!("column index {i} out of range")),
                    Child::Merge(s) if s < t => merge_uses[s] += 1,
                    Child::Merge(s) => {
                        return bad(format!("merge {t} refers to merge {s} that is not earlier"))
                    }
                }
            }
        }
        if let Some(Child::Leaf(i)) = root {
            if i < n {
                leaf_uses[i] += 1;
            }
        }
        if let Some(i) = leaf_uses.iter().position(|&u| u != 1) {
            return bad(format!("column {i} appears {} times", leaf_uses[i]));
        }
        match root {
            None if n == 0 && merges.is_empty() => {}
            Some(Child::Leaf(0)) if n == 1 && merges.is_empty() => {}
            Some(Child::Merge(r)) if r + 1 == merges.len() => {
                if let Some(t) = merge_uses[..r].iter().position(|&u| u != 1) {
                    return bad(format!("merge {t} used {} times", merge_uses[t]));
                }
                if merge_uses[r] != 0 {
                    return bad("root merge is used as a child".into());
                }
            }
            _ => return bad("root must be the last merge".into()),
        }

        let internal = merges.len().saturating_sub(1);
        let mut adj = vec![Vec::new(); n + internal];
        let node_of = |c: Child| match c {
            Child::Leaf(i) => i,
            Child::Merge(t) => n + t,
        };
        let mut link = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for (t, &(a, b)) in merges.iter().enumerate() {
            if t + 1 == merges.len() {
                link(node_of(a), node_of(b));
            } else {
                link(node_of(a), n + t);
                link(node_of(b), n + t);
            }
        }
        let mut leaf_of = vec![None; n + internal];
        for (i, slot) in leaf_of.iter_mut().take(n).enumerate() {
            *slot = Some(i);
        }
        let d = BranchDecomposition { n, adj, leaf_of };
        d.validate()?;
        Ok(d)
    }

    /// Checks the degree and bijection invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedDecomposition(m));
        let nodes = self.adj.len();
        let mut seen = vec![false; self.n];
        for (v, nb) in self.adj.iter().enumerate() {
            match self.leaf_of[v] {
                Some(c) => {
                    if c >= self.n || seen[c] {
                        return bad(format!("leaf map is not a bijection at column {c}"));
                    }
                    seen[c] = true;
                    let want = usize::from(self.n > 1);
                    if nb.len() != want {
                        return bad(format!("leaf node {v} has degree {}", nb.len()));
                    }
                }
                None if nb.len() != 3 => {
                    return bad(format!("internal node {v} has degree {}", nb.len()))
                }
                None => {}
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("leaf map does not cover every column".into());
        }
        let edges: usize = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        if nodes > 0 && (edges + 1 != nodes || self.reachable_from(0) != nodes) {
            return bad("not a tree".into());
        }
        Ok(())
    }

    fn reachable_from(&self, start: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// Number of columns.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn leaf_column(&self, v: usize) -> Option<usize> {
        self.leaf_of[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, nb) in self.adj.iter().enumerate() {
            for &w in nb {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    /// Columns at leaves reachable from `to` without crossing the edge `(from, to)`.
    pub fn side(&self, from: usize, to: usize) -> ColSet {
        let mut out = ColSet::empty(self.n);
        let mut stack = vec![(to, from)];
        while let Some((v, parent)) = stack.pop() {
            if let Some(c) = self.leaf_of[v] {
                out.insert(c);
            }
            for &w in &self.adj[v] {
                if w != parent {
                    stack.push((w, v));
                }
            }
        }
        out
    }

    /// `(A_e, B_e)` for every edge `e`.
    pub fn edge_partitions(&self) -> Vec<(ColSet, ColSet)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| {
                let a = self.side(u, v);
                let b = a.complement();
                (a, b)
            })
            .collect()
    }

    /// Subdivides edge `(u, v)` with a new root and lists the merges bottom-up.
    pub fn rooted_at(&self, u: usize, v: usize) -> (Vec<(Child, Child)>, Child) {
        fn walk(
            d: &BranchDecomposition,
            v: usize,
            parent: usize,
            out: &mut Vec<(Child, Child)>,
        ) -> Child {
            if let Some(c) = d.leaf_of[v] {
                return Child::Leaf(c);
            }
            let kids: Vec<usize> = d.adj[v].iter().copied().filter(|&w| w != parent).collect();
            let a = walk(d, kids[0], v, out);
            let b = walk(d, kids[1], v, out);
            out.push((a, b));
            Child::Merge(out.len() - 1)
        }
        let mut merges = Vec::new();
        let a = walk(self, v, u, &mut merges);
        let b = walk(self, u, v, &mut merges);
        merges.push((a, b));
        let root = Child::Merge(merges.len() - 1);
        (merges, root)
    }

    /// Rooted merge list at the first edge (or the trivial root for < 2 columns).
    pub fn merges(&self) -> (Vec<(Child, Child)>, Option<Child>) {
        match self.edges().first() {
            Some(&(u, v)) => {
                let (m, r) = self.rooted_at(u, v);
                (m, Some(r))
            }
            None if self.n == 1 => (Vec::new(), Some(Child::Leaf(0))),
            None => (Vec::new(), None),
        }
    }

    /// Deletes the leaves outside `keep`, suppresses degree-2 nodes and
    /// re-indexes the kept columns in increasing order.
    pub fn restrict(&self, keep: &ColSet) -> Result<BranchDecomposition> {
        let (merges, root) = self.merges();
        let new_index: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(k, i)| (i, k)).collect();
        let mut mapped: Vec<Option<Child>> = Vec::with_capacity(merges.len());
        let mut out: Vec<(Child, Child)> = Vec::new();
        let resolve = |c: Child, mapped: &[Option<Child>]| match c {
            Child::Leaf(i) => new_index.get(&i).map(|&k| Child::Leaf(k)),
            Child::Merge(t) => mapped[t],
        };
        for &(a, b) in &merges {
            let m = match (resolve(a, &mapped), resolve(b, &mapped)) {
                (Some(x), Some(y)) => {
                    out.push((x, y));
                    Some(Child::Merge(out.len() - 1))
                }
                (x, None) => x,
                (None, y) => y,
            };
            mapped.push(m);
        }
        let new_root = root.and_then(|r| resolve(r, &mapped));
        BranchDecomposition::from_merges(keep.len(), &out, new_root)
    }

    /// Writes the merge-file format:
    /// `merge <id> = <child> <child>` per internal merge, then `root = <id>`.
    pub fn to_text(&self, names: &[String]) -> String {
        let (merges, root) = self.merges();
        let taken: HashSet<&str> = names.iter().map(String::as_str).collect();
        let mut prefix = "n".to_string();
        while (1..=merges.len()).any(|t| taken.contains(format!("{prefix}{t}").as_str())) {
            prefix.push('_');
        }
        let label = |c: Child| match c {
            Child::Leaf(i) => names[i].clone(),
            Child::Merge(t) => format!("{prefix}{}", t + 1),
        };
        let mut s = String::new();
        for (t, &(a, b)) in merges.iter().enumerate() {
            writeln!(s, "merge {prefix}{} = {} {}", t + 1, label(a), label(b)).unwrap();
        }
        if let Some(r) = root {
            writeln!(s, "root = {}", label(r)).unwrap();
        }
        s
    }

    /// Parses the merge-file format against the given column names. Blank
    /// lines and lines starting with `#` are ignored.
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let col: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut merges = Vec::new();
        let mut root = None;
        let err = |line: usize, msg: String| Error::DecompositionParse { line, msg };
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if root.is_some() {
                return Err(err(line, "content after the root line".into()));
            }
            let tok: Vec<&str> = t.split_whitespace().collect();
            let child = |name: &str| -> Result<Child> {
                if let Some(&m) = ids.get(name) {
                    Ok(Child::Merge(m))
                } else if let Some(&c) = col.get(name) {
                    Ok(Child::Leaf(c))
                } else {
                    Err(err(line, format!("unknown name `{name}`")))
                }
            };
            match tok.as_slice() {
                ["merge", id, "=", a, b] => {
                    if col.contains_key(id) || ids.contains_key(*id) {
                        return Err(err(line, format!("id `{id}` is already defined")));
                    }
                    let pair = (child(a)?, child(b)?);
                    merges.push(pair);
                    ids.insert(id.to_string(), merges.len() - 1);
                }
                ["root", "=", r] => root = Some(child(r)?),
                _ => return Err(err(line, format!("unrecognized line `{t}`"))),
            }
        }
        if root.is_none() && !names.is_empty() {
            return Err(err(text.lines().count(), "missing root line".into()));
        }
        BranchDecomposition::from_merges(names.len(), &merges, root)
    }
}

/// Largest edge connectivity; `1` (= `ρ(∅)`) for trees without edges.
pub fn width_of(m: &LinearMatroid, d: &BranchDecomposition) -> Result<usize> {
    if m.ground_size() != d.ground_size() {
        return Err(Error::MalformedDecomposition(format!(
            "decomposition has {} leaves, matroid has {} elements",
            d.ground_size(),
            m.ground_size()
        )));
    }
    d.validate()?;
    Ok(d.edge_partitions()
        .iter()
        .map(|(a, _)| m.connectivity(a))
        .max()
        .unwrap_or(1))
}

/// Builds a branch decomposition of `m`.
///
/// `Exhaustive` returns a minimum-width tree via dynamic programming over
/// column subsets and refuses more than `limit` columns. `Greedy` merges the
/// cheapest pair of clusters bottom-up and also tries the caterpillar in
/// column order, keeping whichever is narrower.
pub fn decompose(
    m: &LinearMatroid,
    strategy: Strategy,
    limit: usize,
) -> Result<BranchDecomposition> {
    let n = m.ground_size();
    if n < 2 {
        return BranchDecomposition::from_merges(n, &[], (n == 1).then_some(Child::Leaf(0)));
    }
    match strategy {
        Strategy::Exhaustive => {
            // subset masks are u32
            let cap = limit.min(24);
            if n > cap {
                return Err(Error::ExhaustiveLimit { n, limit: cap });
            }
            exhaustive(m)
        }
        Strategy::Greedy => {
            let agglo = agglomerative(m)?;
            let cat = caterpillar(n)?;
            if width_of(m, &cat)? < width_of(m, &agglo)? {
                Ok(cat)
            } else {
                Ok(agglo)
            }
        }
    }
}

fn exhaustive(m: &LinearMatroid) -> Result<BranchDecomposition> {
    let n = m.ground_size();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let size = full as usize + 1;
    let rank: Vec<usize> = (0..size)
        .map(|mask| m.rank_of(&ColSet::from_mask(n, mask as u64)))
        .collect();
    let total = rank[full as usize];
    let rho = |mask: u32| rank[mask as usize] + rank[(full ^ mask) as usize] + 1 - total;

    // best[mask]: min over rooted hierarchies of `mask` of the max ρ over nodes
    let mut best = vec![usize::MAX; size];
    let mut split = vec![0u32; size];
    let mut masks: Vec<u32> = (1..=full).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        if mask.count_ones() == 1 {
            best[mask as usize] = rho(mask);
            continue;
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // A ranges over proper subsets of `mask` that contain the lowest bit
        let mut sub = rest;
        let mut choice = (usize::MAX, 0u32);
        loop {
            let a = sub | low;
            if a != mask {
                let w = best[a as usize].max(best[(mask ^ a) as usize]);
                if w < choice.0 || (w == choice.0 && a < choice.1) {
                    choice = (w, a);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[mask as usize] = choice.0.max(rho(mask));
        split[mask as usize] = choice.1;
    }

    fn build(mask: u32, split: &[u32], out: &mut Vec<(Child, Child)>) -> Child {
        if mask.count_ones() == 1 {
            return Child::Leaf(mask.trailing_zeros() as usize);
        }
        let a = split[mask as usize];
        let l = build(a, split, out);
        let r = build(mask ^ a, split, out);
        out.push((l, r));
        Child::Merge(out.len() - 1)
    }
    let mut merges = Vec::new();
    let root = build(full, &split, &mut merges);
    BranchDecomposition::from_merges(n, &merges, Some(root))
}

fn agglomerative(m: &LinearMatroid) -> Result<BranchDecomposition> {
    let n = m.ground_size();
    let mut clusters: Vec<(ColSet, Child)> = (0..n)
        .map(|i| (ColSet::singleton(n, i), Child::Leaf(i)))
        .collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        let mut pick: Option<(usize, ColSet, usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let u = clusters[i].0.union(&clusters[j].0);
                let r = m.connectivity(&u);
                let better = match &pick {
                    None => true,
                    Some((br, bu, _, _)) => r < *br || (r == *br && u < *bu),
                };
                if better {
                    pick = Some((r, u, i, j));
                }
            }
        }
        let (_, u, i, j) = pick.unwrap();
        let (_, cj) = clusters.remove(j);
        let (_, ci) = clusters.remove(i);
        merges.push((ci, cj));
        clusters.push((u, Child::Merge(merges.len() - 1)));
    }
    BranchDecomposition::from_merges(n, &merges, Some(clusters[0].1))
}

/// `((x1 x2) x3) ...` in column order.
pub fn caterpillar(n: usize) -> Result<BranchDecomposition> {
    if n < 2 {
        return BranchDecomposition::from_merges(n, &[], (n == 1).then_some(Child::Leaf(0)));
    }
    let mut merges = vec![(Child::Leaf(0), Child::Leaf(1))];
    for i in 2..n {
        merges.push((Child::Merge(merges.len() - 1), Child::Leaf(i)));
    }
    let root = Child::Merge(merges.len() - 1);
    BranchDecomposition::from_merges(n, &merges, Some(root))
}

/// One member of the rooted module family.
#[derive(Debug, Clone)]
pub struct ModNode {
    pub set: ColSet,
    pub children: Option<(usize, usize)>,
    pub interface: ModuleInterface,
}

/// Binary rooted family of k-modules. Nodes are stored children-first, so
/// the root is the last node.
#[derive(Debug, Clone)]
pub struct ModTree {
    pub nodes: Vec<ModNode>,
    pub width: usize,
    pub k: usize,
}

impl ModTree {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Structural check of properties P1 and P2 on the family of node sets.
    pub fn check_binary_rooted(&self) -> std::result::Result<(), String> {
        let family: Vec<&ColSet> = self.nodes.iter().map(|n| &n.set).collect();
        let members: HashSet<&ColSet> = family.iter().copied().collect();
        if members.len() != family.len() {
            return Err("family has repeated sets".into());
        }
        let universe = family[0].universe();
        let full = ColSet::full(universe);
        for a in &family {
            if **a == full {
                continue;
            }
            let partners = family
                .iter()
                .filter(|b| a.is_disjoint(b) && members.contains(&a.union(b)))
                .count();
            if partners != 1 {
                return Err(format!("{a:?} has {partners} siblings"));
            }
        }
        for c in family.iter().filter(|c| c.len() >= 2) {
            let ok = family
                .iter()
                .any(|a| a.is_subset(c) && **a != **c && members.contains(&c.difference(a)));
            if !ok {
                return Err(format!("{c:?} does not split within the family"));
            }
        }
        if !members.contains(&full) {
            return Err("root is missing".into());
        }
        Ok(())
    }
}

/// Roots `d` at the edge of least connectivity (ties: lexicographically
/// smaller side) and attaches module interfaces. Requires `Q = R`.
pub fn to_mod_family(p: &PolyhedronSpec, d: &BranchDecomposition) -> Result<ModTree> {
    let n = p.ncols();
    if p.variable_set()? != p.all_columns() {
        return Err(Error::NotReduced);
    }
    let m = p.q_matroid()?;
    let width = width_of(m, d)?;

    let (merges, root) = match d.edges().into_iter().min_by_key(|&(u, v)| {
        let a = d.side(u, v);
        let b = a.complement();
        (m.connectivity(&a), a.min(b))
    }) {
        Some((u, v)) => {
            let (merges, r) = d.rooted_at(u, v);
            (merges, Some(r))
        }
        None => (Vec::new(), (n == 1).then_some(Child::Leaf(0))),
    };

    let mut nodes: Vec<ModNode> = Vec::new();
    let mut leaf_node = vec![usize::MAX; n];
    let mut merge_node = Vec::with_capacity(merges.len());
    let push = |set: ColSet, children, nodes: &mut Vec<ModNode>| -> Result<usize> {
        let interface = p.interface(&set)?;
        nodes.push(ModNode {
            set,
            children,
            interface,
        });
        Ok(nodes.len() - 1)
    };
    // leaves first, in the order they are reached
    let visit_leaf =
        |c: Child, nodes: &mut Vec<ModNode>, leaf_node: &mut Vec<usize>| -> Result<()> {
            if let Child::Leaf(i) = c {
                if leaf_node[i] == usize::MAX {
                    leaf_node[i] = push(ColSet::singleton(n, i), None, nodes)?;
                }
            }
            Ok(())
        };
    for &(a, b) in &merges {
        visit_leaf(a, &mut nodes, &mut leaf_node)?;
        visit_leaf(b, &mut nodes, &mut leaf_node)?;
        let idx = |c: Child, merge_node: &[usize]| match c {
            Child::Leaf(i) => leaf_node[i],
            Child::Merge(t) => merge_node[t],
        };
        let (ia, ib) = (idx(a, &merge_node), idx(b, &merge_node));
        let set = nodes[ia].set.union(&nodes[ib].set);
        merge_node.push(push(set, Some((ia, ib)), &mut nodes)?);
    }
    match root {
        Some(Child::Leaf(i)) => {
            push(ColSet::singleton(n, i), None, &mut nodes)?;
        }
        None => {
            push(ColSet::empty(0), None, &mut nodes)?;
        }
        Some(Child::Merge(_)) => {}
    }
    let k = width - 1;
    debug_assert!(nodes.iter().all(|node| node.interface.dim <= k));
    Ok(ModTree { nodes, width, k })
}
