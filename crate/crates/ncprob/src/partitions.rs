//! Non-crossing partitions with linearly ordered blocks, their subclasses, and
//! peak/bottom analysis of index sequences.
//!
//! Ground-set elements are positive integers; block indices in classifications are
//! 1-based positions in the linear order (so `V₃` is index 3).

use alloc::collections::BTreeSet;
use core::fmt;
use core::str::FromStr;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An index sequence `(i₁, …, i_n)` with neighbouring entries distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSequence(Vec<usize>);

impl IndexSequence {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSequence);
        }
        Ok(IndexSequence(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// 1-based positions of peaks and bottoms.
///
/// An endpoint is a peak (bottom) when it exceeds (is below) its only neighbour.
/// A sequence of length 1 has neither.
pub fn peaks_bottoms(seq: &IndexSequence) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let s = &seq.0;
    let n = s.len();
    let mut peaks = BTreeSet::new();
    let mut bottoms = BTreeSet::new();
    if n < 2 {
        return (peaks, bottoms);
    }
    for k in 0..n {
        let left = if k > 0 { Some(s[k - 1]) } else { None };
        let right = s.get(k + 1).copied();
        let above = left.map_or(true, |l| s[k] > l) && right.map_or(true, |r| s[k] > r);
        let below = left.map_or(true, |l| s[k] < l) && right.map_or(true, |r| s[k] < r);
        if above {
            peaks.insert(k + 1);
        } else if below {
            bottoms.insert(k + 1);
        }
    }
    (peaks, bottoms)
}

/// 1-based split of the positions `1..n−1` into descents `E` (`i_k > i_{k+1}`)
/// and ascents `F` (`i_k < i_{k+1}`). Peaks other than `n` land in `E`, bottoms
/// other than `n` in `F`.
pub fn descent_split(seq: &IndexSequence) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut e = BTreeSet::new();
    let mut f = BTreeSet::new();
    for (k, w) in seq.0.windows(2).enumerate() {
        if w[0] > w[1] {
            e.insert(k + 1);
        } else {
            f.insert(k + 1);
        }
    }
    (e, f)
}

/// Partition classes that can be enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartitionClass {
    /// Non-crossing partitions, blocks ordered by minimum.
    NC,
    /// Non-crossing partitions with every linear order of the blocks.
    LNC,
    /// Monotone: a block nested inside another comes after it.
    M,
    /// Anti-monotone: a block nested inside another comes before it.
    AM,
    /// Interval partitions, ordered left to right.
    I,
    /// Ordered non-crossing partitions whose last block contains both endpoints.
    LNCO,
    /// Non-crossing interval partitions with an outermost last block.
    NCIO,
}

impl PartitionClass {
    pub const ALL: [PartitionClass; 7] = [
        PartitionClass::NC,
        PartitionClass::LNC,
        PartitionClass::M,
        PartitionClass::AM,
        PartitionClass::I,
        PartitionClass::LNCO,
        PartitionClass::NCIO,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PartitionClass::NC => "NC",
            PartitionClass::LNC => "LNC",
            PartitionClass::M => "M",
            PartitionClass::AM => "AM",
            PartitionClass::I => "I",
            PartitionClass::LNCO => "LNCO",
            PartitionClass::NCIO => "NCIO",
        }
    }
}

impl fmt::Display for PartitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartitionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartitionClass::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s)).ok_or(Error::UnknownKind)
    }
}

/// A non-crossing partition with a linear order on its blocks.
///
/// Blocks are kept in canonical form (sorted by minimum); `order` lists canonical
/// block indices from first to last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedNCPartition {
    ground: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl OrderedNCPartition {
    /// Partition of `{1, …, n}` with blocks given in linear order.
    pub fn new(n: usize, ordered_blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::on_ground((1..=n).collect(), ordered_blocks)
    }

    /// Partition of an arbitrary finite ground set with blocks given in linear order.
    pub fn on_ground(ground: Vec<usize>, ordered_blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut ground = ground;
        ground.sort_unstable();
        ground.dedup();
        let mut blocks: Vec<Vec<usize>> = ordered_blocks;
        for b in &mut blocks {
            b.sort_unstable();
            if b.is_empty() || b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidPartition);
            }
        }
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != ground {
            return Err(Error::InvalidPartition);
        }
        if crosses(&blocks) {
            return Err(Error::InvalidPartition);
        }
        let mut idx: Vec<usize> = (0..blocks.len()).collect();
        idx.sort_by_key(|&i| blocks[i][0]);
        let mut rank = vec![0; blocks.len()];
        for (c, &i) in idx.iter().enumerate() {
            rank[i] = c;
        }
        let canonical = idx.iter().map(|&i| blocks[i].clone()).collect();
        let order = (0..blocks.len()).map(|i| rank[i]).collect();
        Ok(OrderedNCPartition { ground, blocks: canonical, order })
    }

    /// From canonical blocks (any order of listing is accepted) and the list of
    /// canonical indices in linear order.
    pub fn from_canonical(ground: Vec<usize>, blocks: Vec<Vec<usize>>, order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; blocks.len()];
        for &o in &order {
            if o >= blocks.len() || seen[o] {
                return Err(Error::InvalidPartition);
            }
            seen[o] = true;
        }
        if order.len() != blocks.len() {
            return Err(Error::InvalidPartition);
        }
        Self::on_ground(ground, order.iter().map(|&o| blocks[o].clone()).collect())
    }

    fn raw(ground: Vec<usize>, blocks: Vec<Vec<usize>>, order: Vec<usize>) -> Self {
        OrderedNCPartition { ground, blocks, order }
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    /// Number of blocks `|π|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks sorted by minimum.
    pub fn canonical_blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Canonical indices in linear order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `V_i` for `1 ≤ i ≤ |π|`.
    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[self.order[i - 1]]
    }

    /// `(V₁, …, V_k)`.
    pub fn ordered_blocks(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.order.iter().map(move |&o| self.blocks[o].as_slice())
    }

    /// The same blocks with the linear order reversed.
    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self::raw(self.ground.clone(), self.blocks.clone(), order)
    }

    /// Immediate nesting parent of each `V_i` as a 1-based linear index.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let canon = nesting_parents(&self.blocks);
        let mut rank = vec![0; self.len()];
        for (pos, &o) in self.order.iter().enumerate() {
            rank[o] = pos + 1;
        }
        self.order.iter().map(|&o| canon[o].map(|p| rank[p])).collect()
    }

    /// True when `V_i ≻ V_j`, i.e. `V_i` lies strictly inside `V_j`.
    pub fn nested_in(&self, i: usize, j: usize) -> bool {
        inside(self.block(i), self.block(j))
    }

    /// ASCII diagram, one row per block in linear order.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        let width = self.len().to_string().len() + 1;
        out.push_str(&format!("{:width$} ", ""));
        for e in &self.ground {
            out.push_str(&format!("{:>3}", e));
        }
        out.push('\n');
        for (i, b) in self.ordered_blocks().enumerate() {
            out.push_str(&format!("{:<width$} ", format!("V{}", i + 1)));
            let (lo, hi) = (b[0], b[b.len() - 1]);
            for e in &self.ground {
                let c = if b.contains(e) {
                    "  o"
                } else if *e > lo && *e < hi {
                    "---"
                } else {
                    "  ."
                };
                out.push_str(c);
            }
            out.push('\n');
        }
        out
    }
}

fn inside(v: &[usize], w: &[usize]) -> bool {
    w[0] < v[0] && v[v.len() - 1] < w[w.len() - 1]
}

fn crosses(blocks: &[Vec<usize>]) -> bool {
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            for w in a.windows(2) {
                let inner = b.iter().filter(|&&x| w[0] < x && x < w[1]).count();
                if inner > 0 && inner < b.len() {
                    return true;
                }
            }
            for w in b.windows(2) {
                let inner = a.iter().filter(|&&x| w[0] < x && x < w[1]).count();
                if inner > 0 && inner < a.len() {
                    return true;
                }
            }
        }
    }
    false
}

/// Immediate nesting parent of each block of a non-crossing partition, as an index
/// into `blocks`.
pub fn nesting_parents(blocks: &[Vec<usize>]) -> Vec<Option<usize>> {
    blocks
        .iter()
        .map(|v| {
            blocks
                .iter()
                .enumerate()
                .filter(|(_, w)| inside(v, w))
                .max_by_key(|(_, w)| w[0])
                .map(|(j, _)| j)
        })
        .collect()
}

/// Block classification of an ordered non-crossing partition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockClassification {
    pub s1: BTreeSet<usize>,
    pub s2: BTreeSet<usize>,
    pub t1: BTreeSet<usize>,
    pub t2: BTreeSet<usize>,
    pub outer: BTreeSet<usize>,
    pub inner: BTreeSet<usize>,
}

/// Outer blocks go to `S₁` and `T₂`. An inner block `V_i` with immediate parent
/// `V_j` goes to `S₁` and `T₁` when `j < i`, and to `S₂` and `T₂` when `j > i`.
pub fn classify(p: &OrderedNCPartition) -> BlockClassification {
    let mut c = BlockClassification::default();
    for (pos, parent) in p.parents().into_iter().enumerate() {
        let i = pos + 1;
        match parent {
            None => {
                c.outer.insert(i);
                c.s1.insert(i);
                c.t2.insert(i);
            }
            Some(j) => {
                c.inner.insert(i);
                if j < i {
                    c.s1.insert(i);
                    c.t1.insert(i);
                } else {
                    c.s2.insert(i);
                    c.t2.insert(i);
                }
            }
        }
    }
    c
}

/// All non-crossing partitions of a sorted ground set, canonical, blocks by minimum.
fn nc_blocks(ground: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if ground.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let first = ground[0];
    let rest = &ground[1..];
    // choose the remaining members of the block containing `first` as positions in `rest`
    let m = rest.len();
    for mask in 0u32..(1u32 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
        let mut block = vec![first];
        block.extend(chosen.iter().map(|&k| rest[k]));
        // gaps between consecutive members, and after the last one
        let mut gaps: Vec<&[usize]> = Vec::new();
        let mut start = 0;
        for &k in &chosen {
            gaps.push(&rest[start..k]);
            start = k + 1;
        }
        gaps.push(&rest[start..]);
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in gaps {
            let subs = nc_blocks(gap);
            let mut next = Vec::with_capacity(partial.len() * subs.len());
            for p in &partial {
                for s in &subs {
                    let mut q = p.clone();
                    q.extend(s.iter().cloned());
                    next.push(q);
                }
            }
            partial = next;
        }
        for mut p in partial {
            p.sort_by_key(|b| b[0]);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Advance to the next permutation in lexicographic order; false after the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn all_orders(ground: &[usize], blocks: &[Vec<usize>], keep: impl Fn(&OrderedNCPartition) -> bool, out: &mut Vec<OrderedNCPartition>) {
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    loop {
        let p = OrderedNCPartition::raw(ground.to_vec(), blocks.to_vec(), order.clone());
        if keep(&p) {
            out.push(p);
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
}

fn is_monotone(p: &OrderedNCPartition) -> bool {
    let k = p.len();
    (1..=k).all(|i| (1..=k).all(|j| !p.nested_in(i, j) || i > j))
}

fn is_anti_monotone(p: &OrderedNCPartition) -> bool {
    let k = p.len();
    (1..=k).all(|i| (1..=k).all(|j| !p.nested_in(i, j) || i < j))
}

/// Every partition of `class` on `ground` (sorted, duplicates removed), ordered
/// lexicographically by canonical blocks and then by linear order.
///
/// The empty ground set yields the empty partition once (for NCIO as well).
pub fn enumerate(class: PartitionClass, ground: &[usize]) -> Vec<OrderedNCPartition> {
    let mut ground = ground.to_vec();
    ground.sort_unstable();
    ground.dedup();
    let mut out = Vec::new();
    if ground.is_empty() {
        out.push(OrderedNCPartition::raw(Vec::new(), Vec::new(), Vec::new()));
        return out;
    }
    match class {
        PartitionClass::NC => {
            for b in nc_blocks(&ground) {
                let k = b.len();
                out.push(OrderedNCPartition::raw(ground.clone(), b, (0..k).collect()));
            }
        }
        PartitionClass::LNC => {
            for b in nc_blocks(&ground) {
                all_orders(&ground, &b, |_| true, &mut out);
            }
        }
        PartitionClass::M => {
            for b in nc_blocks(&ground) {
                all_orders(&ground, &b, is_monotone, &mut out);
            }
        }
        PartitionClass::AM => {
            for b in nc_blocks(&ground) {
                all_orders(&ground, &b, is_anti_monotone, &mut out);
            }
        }
        PartitionClass::I => {
            for b in interval_blocks(&ground) {
                let k = b.len();
                out.push(OrderedNCPartition::raw(ground.clone(), b, (0..k).collect()));
            }
        }
        PartitionClass::LNCO => {
            let hi = ground[ground.len() - 1];
            for b in nc_blocks(&ground) {
                if b[0].last() == Some(&hi) {
                    all_orders(&ground, &b, |p| p.block(p.len()) == b[0].as_slice(), &mut out);
                }
            }
        }
        PartitionClass::NCIO if ground.len() == 1 => {
            out.push(ncio_structure(&ground, &ground).expect("endpoints included"));
        }
        PartitionClass::NCIO => {
            let inner = &ground[1..ground.len() - 1];
            let m = inner.len();
            for mask in 0u32..(1u32 << m) {
                let mut v = vec![ground[0]];
                v.extend((0..m).filter(|&k| mask >> k & 1 == 1).map(|k| inner[k]));
                v.push(ground[ground.len() - 1]);
                out.push(ncio_structure(&ground, &v).expect("endpoints included"));
            }
        }
    }
    out.sort();
    out
}

/// [`enumerate`] on `{1, …, n}`.
pub fn enumerate_n(class: PartitionClass, n: usize) -> Vec<OrderedNCPartition> {
    enumerate(class, &(1..=n).collect::<Vec<_>>())
}

fn interval_blocks(ground: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let m = ground.len() - 1;
    let mut out = Vec::new();
    for cuts in 0u32..(1u32 << m) {
        let mut blocks = Vec::new();
        let mut cur = vec![ground[0]];
        for k in 0..m {
            if cuts >> k & 1 == 1 {
                blocks.push(core::mem::take(&mut cur));
            }
            cur.push(ground[k + 1]);
        }
        blocks.push(cur);
        out.push(blocks);
    }
    out.sort();
    out
}

/// The element of NCIO(E) with outermost block `v`: each run of elements of `E`
/// strictly between consecutive members of `v` becomes a block, ordered left to
/// right, followed by `v`.
pub fn ncio_structure(ground: &[usize], v: &[usize]) -> Result<OrderedNCPartition> {
    let mut ground = ground.to_vec();
    ground.sort_unstable();
    ground.dedup();
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    let (Some(lo), Some(hi)) = (ground.first(), ground.last()) else {
        return Err(Error::InvalidOutermost);
    };
    if v.first() != Some(lo) || v.last() != Some(hi) {
        return Err(Error::InvalidOutermost);
    }
    if v.iter().any(|x| ground.binary_search(x).is_err()) {
        return Err(Error::InvalidPartition);
    }
    let mut blocks = Vec::new();
    for w in v.windows(2) {
        let gap: Vec<usize> = ground.iter().copied().filter(|&x| w[0] < x && x < w[1]).collect();
        if !gap.is_empty() {
            blocks.push(gap);
        }
    }
    blocks.push(v);
    OrderedNCPartition::on_ground(ground, blocks)
}

/// Image of an odd interval partition `(V₁, …, V_{2k+1})` in NCIO:
/// `(V₂, V₄, …, V_{2k}, V₁ ∪ V₃ ∪ … ∪ V_{2k+1})`.
pub fn oi_embed(p: &OrderedNCPartition) -> Result<OrderedNCPartition> {
    let blocks: Vec<&[usize]> = p.ordered_blocks().collect();
    if blocks.len() % 2 == 0 {
        return Err(Error::InvalidPartition);
    }
    let mut out: Vec<Vec<usize>> = blocks.iter().skip(1).step_by(2).map(|b| b.to_vec()).collect();
    out.push(blocks.iter().step_by(2).flat_map(|b| b.iter().copied()).collect());
    OrderedNCPartition::on_ground(p.ground().to_vec(), out)
}

/// Intervals `{a, …, b}` of `{1, …, n}`, ordered by `(a, b)`.
pub fn intervals(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            out.push((a, b));
        }
    }
    out
}

/// The map `L(π) = (σ, σᶜ)`: `σ` is the last block together with every block nested
/// inside it, in π-order, on `I = [min V_last, max V_last]`; `σᶜ` holds the remaining
/// blocks in π-order.
pub fn lnco_decompose(p: &OrderedNCPartition) -> (OrderedNCPartition, OrderedNCPartition) {
    if p.is_empty() {
        return (p.clone(), p.clone());
    }
    let last = p.block(p.len());
    let (lo, hi) = (last[0], last[last.len() - 1]);
    let (mut sigma, mut rest) = (Vec::new(), Vec::new());
    for b in p.ordered_blocks() {
        if b[0] >= lo && b[b.len() - 1] <= hi {
            sigma.push(b.to_vec());
        } else {
            rest.push(b.to_vec());
        }
    }
    let (gi, gc): (Vec<usize>, Vec<usize>) = p.ground().iter().partition(|&&x| lo <= x && x <= hi);
    (
        OrderedNCPartition::on_ground(gi, sigma).expect("sub-partition of a valid partition"),
        OrderedNCPartition::on_ground(gc, rest).expect("sub-partition of a valid partition"),
    )
}

/// Every π with `L(π) = (σ, σᶜ)`: the blocks of σ other than its last one are
/// shuffled with those of σᶜ, keeping both relative orders, and σ's last block is
/// appended.
pub fn lnco_fiber(sigma: &OrderedNCPartition, sigma_c: &OrderedNCPartition) -> Vec<OrderedNCPartition> {
    let s: Vec<Vec<usize>> = sigma.ordered_blocks().map(|b| b.to_vec()).collect();
    let c: Vec<Vec<usize>> = sigma_c.ordered_blocks().map(|b| b.to_vec()).collect();
    let mut ground: Vec<usize> = sigma.ground().iter().chain(sigma_c.ground()).copied().collect();
    ground.sort_unstable();
    if s.is_empty() {
        return vec![sigma_c.clone()];
    }
    let head = &s[..s.len() - 1];
    let total = head.len() + c.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << total) {
        if mask.count_ones() as usize != head.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut blocks = Vec::with_capacity(total + 1);
        for pos in 0..total {
            if mask >> pos & 1 == 1 {
                blocks.push(head[i].clone());
                i += 1;
            } else {
                blocks.push(c[j].clone());
                j += 1;
            }
        }
        blocks.push(s[s.len() - 1].clone());
        out.push(OrderedNCPartition::on_ground(ground.clone(), blocks).expect("blocks are compatible"));
    }
    out.sort();
    out
}
