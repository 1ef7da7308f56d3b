//! Rooted trees stored as parent arrays.
//!
//! Vertices are indexed `0..n` internally. The external text format is
//! one-based with `0` marking the root, so the vertex printed as `v_k`
//! is internal index `k - 1`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A validated rooted tree.
///
/// Immutable after construction. `order` lists the vertices so that every
/// parent precedes its children, which is all the level recurrence needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    root: usize,
    order: Vec<usize>,
}

/// Distances from the root, one entry per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelVector {
    levels: Vec<usize>,
}

impl LevelVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Largest level, `l_max`.
    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Levels sorted non-increasing.
    pub fn sorted_descending(&self) -> Vec<usize> {
        let mut v = self.levels.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl RootedTree {
    /// Builds a tree from an external parent list.
    ///
    /// With `one_based` the sentinel is `0` and parents are `1..=n`; otherwise
    /// the sentinel is `-1` and parents are `0..n`.
    pub fn from_parent_list(parents: &[i64], one_based: bool) -> Result<Self> {
        let n = parents.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let sentinel = if one_based { 0 } else { -1 };
        let offset = if one_based { 1 } else { 0 };
        let mut parent = Vec::with_capacity(n);
        for (vertex, &p) in parents.iter().enumerate() {
            if p == sentinel {
                parent.push(None);
                continue;
            }
            let idx = p - offset;
            if idx < 0 || idx as usize >= n {
                return Err(Error::IndexOutOfRange {
                    vertex,
                    parent: p.max(0) as usize,
                    n,
                });
            }
            parent.push(Some(idx as usize));
        }
        Self::from_parents(parent)
    }

    /// Builds a tree from zero-based parent pointers (`None` marks the root).
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut root = None;
        for (v, p) in parent.iter().enumerate() {
            match p {
                None => {
                    if let Some(first) = root {
                        return Err(Error::MultipleRoots { first, second: v });
                    }
                    root = Some(v);
                }
                Some(p) if *p >= n => {
                    return Err(Error::IndexOutOfRange {
                        vertex: v,
                        parent: *p,
                        n,
                    })
                }
                Some(_) => {}
            }
        }
        let root = root.ok_or(Error::NoRoot)?;

        // 0 = unseen, 1 = on the current walk, 2 = known to reach the root
        let mut state = vec![0u8; n];
        state[root] = 2;
        let mut walk = Vec::new();
        for start in 0..n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = parent[v].expect("only the root lacks a parent");
            }
            if state[v] == 1 {
                return Err(Error::CycleDetected { vertex: v });
            }
            for w in walk.drain(..) {
                state[w] = 2;
            }
        }

        let children = children_lists(&parent);
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            order.extend_from_slice(&children[v]);
        }
        Ok(RootedTree {
            parent,
            root,
            order,
        })
    }

    /// Builds the tree whose preorder level sequence is `seq`.
    ///
    /// Vertex `i` is the `i`-th vertex in preorder; its parent is the most
    /// recent earlier vertex one level up.
    pub fn from_level_sequence(seq: &[usize]) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::Empty);
        }
        if seq[0] != 0 {
            return Err(Error::InvalidOrder(
                "level sequence must start at level 0".into(),
            ));
        }
        let mut parent = vec![None; seq.len()];
        let mut last_at_level: Vec<usize> = vec![0];
        for i in 1..seq.len() {
            let l = seq[i];
            if l == 0 || l > last_at_level.len() {
                return Err(Error::InvalidOrder(format!(
                    "level {l} at position {i} is not reachable"
                )));
            }
            parent[i] = Some(last_at_level[l - 1]);
            last_at_level.truncate(l);
            last_at_level.push(i);
        }
        Self::from_parents(parent)
    }

    /// `P_n`: a path rooted at an end vertex.
    pub fn rooted_path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder("rooted path needs n >= 1".into()));
        }
        Self::from_parents((0..n).map(|i| i.checked_sub(1)).collect())
    }

    /// `S_n`: a star rooted at its centre.
    pub fn rooted_star(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder("rooted star needs n >= 1".into()));
        }
        Self::from_parents((0..n).map(|i| (i > 0).then_some(0)).collect())
    }

    /// `R_n`: a star rooted at one of its leaves (root, centre, `n - 2` leaves).
    pub fn star_rooted_at_leaf(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidOrder(
                "star rooted at a leaf needs n >= 3".into(),
            ));
        }
        let parent = (0..n)
            .map(|i| match i {
                0 => None,
                1 => Some(0),
                _ => Some(1),
            })
            .collect();
        Self::from_parents(parent)
    }

    /// Complete `d`-ary tree of the given height, numbered breadth first.
    pub fn complete_dary(d: usize, height: usize) -> Result<Self> {
        const MAX_VERTICES: usize = 1 << 20;
        if d == 0 {
            return Err(Error::InvalidOrder("arity must be at least 1".into()));
        }
        let mut n: usize = 0;
        let mut layer: usize = 1;
        for _ in 0..=height {
            n = n
                .checked_add(layer)
                .filter(|&n| n <= MAX_VERTICES)
                .ok_or_else(|| {
                    Error::ResourceLimit(format!(
                        "complete {d}-ary tree of height {height} exceeds {MAX_VERTICES} vertices"
                    ))
                })?;
            layer = layer.saturating_mul(d);
        }
        Self::from_parents((0..n).map(|i| i.checked_sub(1).map(|j| j / d)).collect())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Vertices in an order where every parent precedes its children.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        children_lists(&self.parent)
    }

    /// Non-root vertices without children, ascending.
    pub fn leaves(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.len()];
        for p in self.parent.iter().flatten() {
            has_child[*p] = true;
        }
        (0..self.len())
            .filter(|&v| v != self.root && !has_child[v])
            .collect()
    }

    pub fn levels(&self) -> LevelVector {
        let mut levels = vec![0; self.len()];
        for &v in &self.order {
            if let Some(p) = self.parent[v] {
                levels[v] = levels[p] + 1;
            }
        }
        LevelVector { levels }
    }

    pub fn is_rooted_path(&self) -> bool {
        self.levels().max_level() + 1 == self.len()
    }

    pub fn is_rooted_star(&self) -> bool {
        self.len() >= 2 && self.levels().max_level() == 1
    }

    /// Removes the leaf `v`; vertices above `v` shift down by one index.
    pub fn delete_leaf(&self, v: usize) -> Result<Self> {
        let n = self.len();
        if v >= n {
            return Err(Error::IndexError(format!(
                "vertex {v} out of range for {n} vertices"
            )));
        }
        if v == self.root {
            return Err(Error::CannotDeleteRoot);
        }
        if self.parent.contains(&Some(v)) {
            return Err(Error::NotALeaf(v));
        }
        let shift = |u: usize| if u > v { u - 1 } else { u };
        let parent = self
            .parent
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != v)
            .map(|(_, p)| p.map(shift))
            .collect();
        Self::from_parents(parent)
    }

    /// Canonical preorder level sequence.
    ///
    /// Child subtrees are ordered by their own canonical sequences,
    /// lexicographically largest first, which yields the largest level
    /// sequence over all child orderings. Two trees are isomorphic as rooted
    /// trees iff their canonical sequences are equal.
    pub fn canonical_level_sequence(&self) -> Vec<usize> {
        let children = self.children();
        let mut encoded: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &v in self.order.iter().rev() {
            let mut subs: Vec<Vec<usize>> = children[v]
                .iter()
                .map(|&c| std::mem::take(&mut encoded[c]))
                .collect();
            subs.sort_unstable_by(|a, b| b.cmp(a));
            let mut seq = Vec::with_capacity(1 + subs.iter().map(Vec::len).sum::<usize>());
            seq.push(0);
            for s in subs {
                seq.extend(s.into_iter().map(|l| l + 1));
            }
            encoded[v] = seq;
        }
        std::mem::take(&mut encoded[self.root])
    }

    /// Relabels the tree into canonical preorder.
    pub fn canonical(&self) -> Self {
        Self::from_level_sequence(&self.canonical_level_sequence())
            .expect("canonical sequences are valid level sequences")
    }

    /// Canonical level sequence as a compact string, e.g. `0,1,2,1`.
    pub fn canonical_encoding(&self) -> String {
        encode_sequence(&self.canonical_level_sequence())
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self.canonical_level_sequence() == other.canonical_level_sequence()
    }

    /// One-based parent list with `0` for the root.
    pub fn to_parent_list(&self) -> Vec<i64> {
        self.parent
            .iter()
            .map(|p| p.map_or(0, |p| p as i64 + 1))
            .collect()
    }

    /// Text tree file: `n` on the first line, the one-based parent list on the second.
    pub fn to_tree_file(&self) -> String {
        let parents: Vec<String> = self
            .to_parent_list()
            .iter()
            .map(ToString::to_string)
            .collect();
        format!("{}\n{}\n", self.len(), parents.join(" "))
    }

    /// Graphviz digraph with edges parent -> child and the root marked.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rooted_tree {\n");
        for v in 0..self.len() {
            if v == self.root {
                let _ = writeln!(out, "  v{0} [label=\"v{0}\", shape=doublecircle, root=true];", v + 1);
            } else {
                let _ = writeln!(out, "  v{0} [label=\"v{0}\"];", v + 1);
            }
        }
        for &v in &self.order {
            if let Some(p) = self.parent[v] {
                let _ = writeln!(out, "  v{} -> v{};", p + 1, v + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn encode_sequence(seq: &[usize]) -> String {
    let parts: Vec<String> = seq.iter().map(ToString::to_string).collect();
    parts.join(",")
}

fn children_lists(parent: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new(); parent.len()];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(v);
        }
    }
    children
}

/// Parses the text tree format.
///
/// Line 1 holds `n`, line 2 holds `n` whitespace-separated one-based
/// parents with `0` marking the root. Blank lines and trailing whitespace
/// are ignored; lines starting with `#` are comments.
pub fn parse_tree_file(text: &str) -> Result<RootedTree> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let (count_line, count_text) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing vertex count".into(),
    })?;
    let mut count_tokens = tokens(count_text);
    let (col, tok) = count_tokens.next().expect("line is non-blank");
    let n: usize = tok.parse().map_err(|_| Error::Parse {
        line: count_line,
        column: col,
        message: format!("expected vertex count, found `{tok}`"),
    })?;
    if let Some((col, tok)) = count_tokens.next() {
        return Err(Error::Parse {
            line: count_line,
            column: col,
            message: format!("unexpected token `{tok}` after vertex count"),
        });
    }
    if n == 0 {
        return Err(Error::Parse {
            line: count_line,
            column: col,
            message: "vertex count must be positive".into(),
        });
    }

    let (parent_line, parent_text) = lines.next().ok_or(Error::Parse {
        line: count_line + 1,
        column: 1,
        message: "missing parent list".into(),
    })?;
    let mut parents = Vec::with_capacity(n);
    let mut end_col = 1;
    for (col, tok) in tokens(parent_text) {
        let p: i64 = tok.parse().map_err(|_| Error::Parse {
            line: parent_line,
            column: col,
            message: format!("expected integer parent index, found `{tok}`"),
        })?;
        if parents.len() == n {
            return Err(Error::Parse {
                line: parent_line,
                column: col,
                message: format!("more than {n} parent entries"),
            });
        }
        if p < 0 || p as usize > n {
            return Err(Error::Parse {
                line: parent_line,
                column: col,
                message: format!("parent index {p} outside 0..={n}"),
            });
        }
        parents.push(p);
        end_col = col + tok.len();
    }
    if parents.len() != n {
        return Err(Error::Parse {
            line: parent_line,
            column: end_col,
            message: format!("expected {n} parent entries, found {}", parents.len()),
        });
    }
    if let Some((line, text)) = lines.next() {
        let col = text.len() - text.trim_start().len() + 1;
        return Err(Error::Parse {
            line,
            column: col,
            message: "unexpected content after parent list".into(),
        });
    }
    RootedTree::from_parent_list(&parents, true)
}

fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}
