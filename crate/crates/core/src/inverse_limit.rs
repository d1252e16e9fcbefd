//! Cycle covers, their finite quotients and bonding maps, and finite
//! truncations of the inverse limit they form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::cop::{cop_check, is_cycle, lop_check, CopMap};
use crate::error::{show, Error, Result};
use crate::orders::{CircOrder, LinOrder};
use crate::{Label, Verdict};

/// A block of a cycle cover. `Interval(a, b)` is the nonempty open interval
/// from `a` forward to `b`; `Interval(t, t)` is everything except `t`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block<T> {
    Point(T),
    Interval(T, T),
}

impl<T: Label> Block<T> {
    pub fn render(&self) -> String {
        match self {
            Block::Point(t) => format!("{t:?}"),
            Block::Interval(a, b) => format!("({a:?},{b:?})"),
        }
    }
}

/// Points strictly between `a` and `b` walking forward from `a`.
fn open_arc<T: Label>(host: &CircOrder<T>, a: &T, b: &T) -> Vec<T> {
    host.walk_from(a)
        .expect("endpoint is a host label")
        .skip(1)
        .take_while(|x| *x != b)
        .cloned()
        .collect()
}

/// The support of an injective cycle, listed in host order from its least
/// label.
fn normalize_cycle<T: Label>(host: &CircOrder<T>, f: &[T]) -> Result<Vec<T>> {
    if f.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let mut seen = BTreeSet::new();
    for t in f {
        if !host.contains(t) {
            return Err(Error::UnknownLabel(show(t)));
        }
        if !seen.insert(t) {
            return Err(Error::NotInjective(show(t)));
        }
    }
    if !is_cycle(host, f)? {
        return Err(Error::NotACycle(show(&f)));
    }
    let least = seen.iter().next().expect("nonempty");
    Ok(host
        .walk_from(least)
        .expect("known label")
        .filter(|x| seen.contains(x))
        .cloned()
        .collect())
}

/// The partition of a circular order by a finite injective cycle, with the
/// quotient circular order and the projection onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover<T: Ord> {
    host: CircOrder<T>,
    cycle: Vec<T>,
    blocks: Vec<Block<T>>,
    members: BTreeMap<Block<T>, Vec<T>>,
    quotient: CircOrder<Block<T>>,
    projection: BTreeMap<T, Block<T>>,
}

pub fn build_cycle_cover<T: Label>(host: &CircOrder<T>, f: &[T]) -> Result<CycleCover<T>> {
    let cycle = normalize_cycle(host, f)?;
    let m = cycle.len();
    let mut blocks = Vec::new();
    let mut members = BTreeMap::new();
    for i in 0..m {
        let (t, next) = (&cycle[i], &cycle[(i + 1) % m]);
        blocks.push(Block::Point(t.clone()));
        members.insert(Block::Point(t.clone()), vec![t.clone()]);
        let arc = open_arc(host, t, next);
        if !arc.is_empty() {
            let b = Block::Interval(t.clone(), next.clone());
            blocks.push(b.clone());
            members.insert(b, arc);
        }
    }
    let projection: BTreeMap<T, Block<T>> = members
        .iter()
        .flat_map(|(b, xs)| xs.iter().map(move |x| (x.clone(), b.clone())))
        .collect();
    let quotient = CircOrder::from_cycle(blocks.clone())?;
    let cover = CycleCover {
        host: host.clone(),
        cycle,
        blocks,
        members,
        quotient,
        projection,
    };
    if cover.projection.len() != host.len() {
        return Err(Error::InvariantViolation("blocks do not partition the host".into()));
    }
    if cover.blocks.len() > 2 * m {
        return Err(Error::InvariantViolation(format!("{} blocks for m = {m}", cover.blocks.len())));
    }
    let verdict = cop_check(&cover.projection, host, &cover.quotient)?;
    if !verdict.is_cop() {
        return Err(Error::InvariantViolation(format!("projection is not COP: {verdict:?}")));
    }
    Ok(cover)
}

impl<T: Label> CycleCover<T> {
    pub fn host(&self) -> &CircOrder<T> {
        &self.host
    }

    /// The cycle's support in host order, from its least label.
    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    pub fn members(&self, b: &Block<T>) -> Option<&[T]> {
        self.members.get(b).map(Vec::as_slice)
    }

    pub fn quotient(&self) -> &CircOrder<Block<T>> {
        &self.quotient
    }

    pub fn projection(&self) -> &BTreeMap<T, Block<T>> {
        &self.projection
    }

    pub fn project(&self, x: &T) -> Option<&Block<T>> {
        self.projection.get(x)
    }

    pub fn support(&self) -> BTreeSet<T> {
        self.cycle.iter().cloned().collect()
    }
}

/// `F1 ⊔ F2`: the union of the supports in host order.
pub fn join_cycles<T: Label>(f1: &[T], f2: &[T], host: &CircOrder<T>) -> Result<Vec<T>> {
    normalize_cycle(host, f1)?;
    normalize_cycle(host, f2)?;
    let union: Vec<T> = f1.iter().chain(f2).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let ordered: Vec<T> = host.labels().iter().filter(|x| union.contains(x)).cloned().collect();
    normalize_cycle(host, &ordered)
}

/// `F1 <= F2` for injective cycles: the support of `F1` lies in that of `F2`.
pub fn is_subcycle<T: Label>(f1: &[T], f2: &[T]) -> bool {
    let s2: BTreeSet<&T> = f2.iter().collect();
    f1.len() <= f2.len() && f1.iter().all(|t| s2.contains(t))
}

/// `f_{F2,F1}: X_{F2} -> X_{F1}`, sending each block to the block containing
/// it. Coherence `f ∘ π_{F2} = π_{F1}` is checked before returning.
pub fn bonding_map<T: Label>(cover2: &CycleCover<T>, cover1: &CycleCover<T>) -> Result<CopMap<Block<T>, Block<T>>> {
    if cover2.host != cover1.host {
        return Err(Error::DomainMismatch("covers of different hosts".into()));
    }
    if !is_subcycle(&cover1.cycle, &cover2.cycle) {
        return Err(Error::NotSubcycle(show(&cover1.cycle), show(&cover2.cycle)));
    }
    let mut table = BTreeMap::new();
    for (b, xs) in &cover2.members {
        let image = &cover1.projection[&xs[0]];
        if xs.iter().any(|x| cover1.projection[x] != *image) {
            return Err(Error::InvariantViolation(format!("block {b:?} straddles two coarser blocks")));
        }
        table.insert(b.clone(), image.clone());
    }
    let map = CopMap::new(cover2.quotient.clone(), cover1.quotient.clone(), table)?;
    if !map.is_cop() || !map.is_onto() {
        return Err(Error::InvariantViolation(format!("bonding map fails: {:?}", map.verdict())));
    }
    for (x, b) in &cover2.projection {
        if map.table()[b] != cover1.projection[x] {
            return Err(Error::InvariantViolation(format!("f ∘ π_F2 != π_F1 at {x:?}")));
        }
    }
    Ok(map)
}

/// The isomorphism `X_F -> X_{gF}` induced by a COP automorphism `g` of the
/// host, together with the cover of `gF`.
pub fn induced_quotient_action<T: Label>(
    g: &BTreeMap<T, T>,
    cover: &CycleCover<T>,
) -> Result<(CycleCover<T>, CopMap<Block<T>, Block<T>>)> {
    let host = &cover.host;
    let verdict = cop_check(g, host, host)?;
    let image: BTreeSet<&T> = g.values().collect();
    if !verdict.is_cop() || image.len() != host.len() {
        return Err(Error::NotCop(format!("{g:?}: {verdict:?}")));
    }
    let gf: Vec<T> = cover.cycle.iter().map(|t| g[t].clone()).collect();
    let target = build_cycle_cover(host, &gf)?;
    let table: BTreeMap<Block<T>, Block<T>> = cover
        .blocks
        .iter()
        .map(|b| {
            let gb = match b {
                Block::Point(t) => Block::Point(g[t].clone()),
                Block::Interval(a, c) => Block::Interval(g[a].clone(), g[c].clone()),
            };
            (b.clone(), gb)
        })
        .collect();
    for (b, gb) in &table {
        if !target.members.contains_key(gb) {
            return Err(Error::InvariantViolation(format!("{gb:?} is not a block of gF")));
        }
        if cover.members[b].iter().any(|x| target.projection[&g[x]] != *gb) {
            return Err(Error::InvariantViolation(format!("g does not carry {b:?} onto {gb:?}")));
        }
    }
    let map = CopMap::new(cover.quotient.clone(), target.quotient.clone(), table)?;
    if !map.is_cop() || !map.is_bijective() {
        return Err(Error::InvariantViolation(format!("induced map fails: {:?}", map.verdict())));
    }
    Ok((target, map))
}

/// A finite truncation of the inverse system of cycle covers: a family of
/// cycles closed under joins with all bonding maps between comparable ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower<T: Ord> {
    host: CircOrder<T>,
    covers: Vec<CycleCover<T>>,
    bondings: BTreeMap<(usize, usize), CopMap<Block<T>, Block<T>>>,
}

/// Closes `cycles` under joins (at most `budget` cycles), then builds every
/// cover and every bonding map and checks coherence and composition.
pub fn build_tower<T: Label>(host: &CircOrder<T>, cycles: &[Vec<T>], budget: usize) -> Result<Tower<T>> {
    let mut family: BTreeSet<Vec<T>> = BTreeSet::new();
    for f in cycles {
        family.insert(normalize_cycle(host, f)?);
    }
    loop {
        let current: Vec<Vec<T>> = family.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                if family.insert(join_cycles(a, b, host)?) {
                    grew = true;
                }
                if family.len() > budget {
                    return Err(Error::BudgetExceeded {
                        needed: family.len() as u128,
                        budget: budget as u64,
                    });
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut ordered: Vec<Vec<T>> = family.into_iter().collect();
    ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let covers = ordered
        .iter()
        .map(|f| build_cycle_cover(host, f))
        .collect::<Result<Vec<_>>>()?;
    let mut bondings = BTreeMap::new();
    for (j, c2) in covers.iter().enumerate() {
        for (i, c1) in covers.iter().enumerate() {
            if i != j && is_subcycle(&c1.cycle, &c2.cycle) {
                bondings.insert((j, i), bonding_map(c2, c1)?);
            }
        }
    }
    let tower = Tower {
        host: host.clone(),
        covers,
        bondings,
    };
    tower.check_composition()?;
    Ok(tower)
}

impl<T: Label> Tower<T> {
    pub fn host(&self) -> &CircOrder<T> {
        &self.host
    }

    pub fn covers(&self) -> &[CycleCover<T>] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Bonding map from level `j` down to level `i`, when `F_i <= F_j`.
    pub fn bonding(&self, j: usize, i: usize) -> Option<&CopMap<Block<T>, Block<T>>> {
        if i == j {
            return None;
        }
        self.bondings.get(&(j, i))
    }

    pub fn comparable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bondings.keys().copied()
    }

    fn check_composition(&self) -> Result<()> {
        for (&(k, j), fkj) in &self.bondings {
            for (&(j2, i), fji) in &self.bondings {
                if j2 != j || i == k {
                    continue;
                }
                let fki = &self.bondings[&(k, i)];
                for b in self.covers[k].blocks() {
                    if fki.table()[b] != fji.table()[&fkj.table()[b]] {
                        return Err(Error::InvariantViolation(format!(
                            "f_{{{k},{i}}} != f_{{{j},{i}}} ∘ f_{{{k},{j}}} at {b:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-derives every bonding map from block membership alone and checks
    /// it against the stored one, along with COP, onto, coherence and the
    /// composition law.
    pub fn verify(&self) -> Result<()> {
        for (j, c2) in self.covers.iter().enumerate() {
            if c2.blocks.len() > 2 * c2.cycle.len() {
                return Err(Error::InvariantViolation(format!("level {j} has too many blocks")));
            }
            if !cop_check(&c2.projection, &self.host, &c2.quotient)?.is_cop() {
                return Err(Error::InvariantViolation(format!("π at level {j} is not COP")));
            }
            for (i, c1) in self.covers.iter().enumerate() {
                let comparable = i != j && c1.support().is_subset(&c2.support());
                if comparable != self.bondings.contains_key(&(j, i)) {
                    return Err(Error::InvariantViolation(format!("bonding ({j},{i}) missing or spurious")));
                }
                if !comparable {
                    continue;
                }
                let stored = &self.bondings[&(j, i)];
                for b in c2.blocks() {
                    let inside: BTreeSet<&Block<T>> = c2.members[b].iter().map(|x| &c1.projection[x]).collect();
                    if inside.len() != 1 || *inside.iter().next().unwrap() != &stored.table()[b] {
                        return Err(Error::InvariantViolation(format!("bonding ({j},{i}) wrong at {b:?}")));
                    }
                }
                for x in self.host.labels() {
                    if stored.table()[&c2.projection[x]] != c1.projection[x] {
                        return Err(Error::InvariantViolation(format!("coherence fails at {x:?}")));
                    }
                }
                if !stored.is_cop() || !stored.is_onto() {
                    return Err(Error::InvariantViolation(format!("bonding ({j},{i}) not COP onto")));
                }
            }
        }
        self.check_composition()
    }

    /// `(π_F(x))_F` over all levels.
    pub fn thread_of(&self, x: &T) -> Result<Vec<Block<T>>> {
        self.covers
            .iter()
            .map(|c| c.project(x).cloned().ok_or_else(|| Error::UnknownLabel(show(x))))
            .collect()
    }

    /// Whether a tuple of blocks, one per level, is coherent under every
    /// bonding map.
    pub fn thread_check(&self, thread: &[Block<T>]) -> Result<bool> {
        if thread.len() != self.covers.len() {
            return Err(Error::DomainMismatch(format!(
                "thread has {} entries, tower has {} levels",
                thread.len(),
                self.covers.len()
            )));
        }
        for (b, c) in thread.iter().zip(&self.covers) {
            if !c.members.contains_key(b) {
                return Err(Error::UnknownLabel(show(b)));
            }
        }
        Ok(self
            .bondings
            .iter()
            .all(|(&(j, i), f)| f.table()[&thread[j]] == thread[i]))
    }

    /// Every coherent thread, by backtracking over the levels.
    pub fn coherent_threads(&self) -> Vec<Vec<Block<T>>> {
        fn go<T: Label>(t: &Tower<T>, partial: &mut Vec<Block<T>>, out: &mut Vec<Vec<Block<T>>>) {
            let k = partial.len();
            if k == t.covers.len() {
                out.push(partial.clone());
                return;
            }
            for b in t.covers[k].blocks() {
                let ok = (0..k).all(|i| {
                    t.bondings.get(&(k, i)).is_none_or(|f| f.table()[b] == partial[i])
                        && t.bondings.get(&(i, k)).is_none_or(|f| f.table()[&partial[i]] == *b)
                });
                if ok {
                    partial.push(b.clone());
                    go(t, partial, out);
                    partial.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Whether induced maps commute with bondings:
    /// `f_{gF2,gF1} ∘ g_{F2} = g_{F1} ∘ f_{F2,F1}` on every comparable pair.
    /// Fails with the pair of levels and a block of the finer one.
    pub fn equivariance_check(&self, g: &BTreeMap<T, T>) -> Result<Verdict<(usize, usize, Block<T>)>> {
        let induced = self
            .covers
            .iter()
            .map(|c| induced_quotient_action(g, c))
            .collect::<Result<Vec<_>>>()?;
        for (&(j, i), f) in &self.bondings {
            let (gc2, g2) = &induced[j];
            let (gc1, g1) = &induced[i];
            let fg = bonding_map(gc2, gc1)?;
            for b in self.covers[j].blocks() {
                if fg.table()[&g2.table()[b]] != g1.table()[&f.table()[b]] {
                    return Ok(Verdict::Fails((j, i, b.clone())));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// Graphviz rendering: one cluster per level, edges for the covering
    /// pairs of the subcycle order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tower {\n  rankdir=TB;\n");
        for (i, c) in self.covers.iter().enumerate() {
            let _ = writeln!(s, "  subgraph cluster_{i} {{");
            let _ = writeln!(s, "    label=\"F = {}\";", escape(&format!("{:?}", c.cycle)));
            for (k, b) in c.blocks().iter().enumerate() {
                let _ = writeln!(s, "    n{i}_{k} [label=\"{}\"];", escape(&b.render()));
            }
            s.push_str("  }\n");
        }
        for (&(j, i), f) in &self.bondings {
            let between = self
                .bondings
                .keys()
                .any(|&(a, b)| a == j && b != i && self.bondings.contains_key(&(b, i)));
            if between {
                continue;
            }
            for (k, b) in self.covers[j].blocks().iter().enumerate() {
                let target = self.covers[i]
                    .blocks()
                    .iter()
                    .position(|x| *x == f.table()[b])
                    .expect("image is a block");
                let _ = writeln!(s, "  n{j}_{k} -> n{i}_{target};");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A block of a chain cover.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainBlock<T> {
    /// Points below the least chain point.
    Below(T),
    Point(T),
    /// Points strictly between consecutive chain points.
    Between(T, T),
    /// Points above the greatest chain point.
    Above(T),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCover<T: Ord> {
    host: LinOrder<T>,
    chain: Vec<T>,
    quotient: LinOrder<ChainBlock<T>>,
    projection: BTreeMap<T, ChainBlock<T>>,
}

/// Chain analogue of [`build_cycle_cover`]; the chain is sorted into host
/// order and empty blocks are dropped.
pub fn build_chain_cover<T: Label>(host: &LinOrder<T>, f: &[T]) -> Result<ChainCover<T>> {
    if f.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let mut support = BTreeSet::new();
    for t in f {
        if !host.contains(t) {
            return Err(Error::UnknownLabel(show(t)));
        }
        if !support.insert(t) {
            return Err(Error::NotInjective(show(t)));
        }
    }
    let chain: Vec<T> = host.labels().iter().filter(|x| support.contains(x)).cloned().collect();
    let mut blocks = Vec::new();
    let mut projection = BTreeMap::new();
    let mut current: Option<ChainBlock<T>> = None;
    let mut k = 0;
    for x in host.labels() {
        let b = if k < chain.len() && *x == chain[k] {
            k += 1;
            ChainBlock::Point(x.clone())
        } else if k == 0 {
            ChainBlock::Below(chain[0].clone())
        } else if k == chain.len() {
            ChainBlock::Above(chain[k - 1].clone())
        } else {
            ChainBlock::Between(chain[k - 1].clone(), chain[k].clone())
        };
        if current.as_ref() != Some(&b) {
            blocks.push(b.clone());
            current = Some(b.clone());
        }
        projection.insert(x.clone(), b);
    }
    let quotient = LinOrder::new(blocks)?;
    if quotient.len() > 2 * chain.len() + 1 {
        return Err(Error::InvariantViolation("too many chain blocks".into()));
    }
    if !lop_check(&projection, host, &quotient)? {
        return Err(Error::InvariantViolation("chain projection is not LOP".into()));
    }
    Ok(ChainCover {
        host: host.clone(),
        chain,
        quotient,
        projection,
    })
}

impl<T: Label> ChainCover<T> {
    pub fn host(&self) -> &LinOrder<T> {
        &self.host
    }

    pub fn chain(&self) -> &[T] {
        &self.chain
    }

    pub fn quotient(&self) -> &LinOrder<ChainBlock<T>> {
        &self.quotient
    }

    pub fn projection(&self) -> &BTreeMap<T, ChainBlock<T>> {
        &self.projection
    }

    pub fn project(&self, x: &T) -> Option<&ChainBlock<T>> {
        self.projection.get(x)
    }
}

pub fn chain_bonding_map<T: Label>(
    cover2: &ChainCover<T>,
    cover1: &ChainCover<T>,
) -> Result<BTreeMap<ChainBlock<T>, ChainBlock<T>>> {
    if cover2.host != cover1.host {
        return Err(Error::DomainMismatch("covers of different hosts".into()));
    }
    if !is_subcycle(&cover1.chain, &cover2.chain) {
        return Err(Error::NotSubcycle(show(&cover1.chain), show(&cover2.chain)));
    }
    let mut table = BTreeMap::new();
    for (x, b2) in &cover2.projection {
        let b1 = &cover1.projection[x];
        if let Some(prev) = table.insert(b2.clone(), b1.clone()) {
            if prev != *b1 {
                return Err(Error::InvariantViolation(format!("block {b2:?} straddles two coarser blocks")));
            }
        }
    }
    if !lop_check(&table, &cover2.quotient, &cover1.quotient)? {
        return Err(Error::InvariantViolation("chain bonding map is not LOP".into()));
    }
    let image: BTreeSet<&ChainBlock<T>> = table.values().collect();
    if image.len() != cover1.quotient.len() {
        return Err(Error::InvariantViolation("chain bonding map is not onto".into()));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTower<T: Ord> {
    host: LinOrder<T>,
    covers: Vec<ChainCover<T>>,
    bondings: BTreeMap<(usize, usize), BTreeMap<ChainBlock<T>, ChainBlock<T>>>,
}

/// Chain analogue of [`build_tower`]; chains are closed under unions.
pub fn build_chain_tower<T: Label>(host: &LinOrder<T>, chains: &[Vec<T>], budget: usize) -> Result<ChainTower<T>> {
    let mut family: BTreeSet<BTreeSet<T>> = BTreeSet::new();
    for f in chains {
        family.insert(build_chain_cover(host, f)?.chain.iter().cloned().collect());
    }
    loop {
        let current: Vec<BTreeSet<T>> = family.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                grew |= family.insert(a.union(b).cloned().collect());
                if family.len() > budget {
                    return Err(Error::BudgetExceeded {
                        needed: family.len() as u128,
                        budget: budget as u64,
                    });
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut ordered: Vec<Vec<T>> = family.into_iter().map(|s| s.into_iter().collect()).collect();
    ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let covers = ordered
        .iter()
        .map(|f| build_chain_cover(host, f))
        .collect::<Result<Vec<_>>>()?;
    let mut bondings = BTreeMap::new();
    for (j, c2) in covers.iter().enumerate() {
        for (i, c1) in covers.iter().enumerate() {
            if i != j && is_subcycle(&c1.chain, &c2.chain) {
                bondings.insert((j, i), chain_bonding_map(c2, c1)?);
            }
        }
    }
    for (&(k, j), fkj) in &bondings {
        for (&(j2, i), fji) in &bondings {
            if j2 == j && i != k && bondings[&(k, i)].iter().any(|(b, c)| fji[&fkj[b]] != *c) {
                return Err(Error::InvariantViolation(format!("composition fails for ({k},{j},{i})")));
            }
        }
    }
    Ok(ChainTower {
        host: host.clone(),
        covers,
        bondings,
    })
}

impl<T: Label> ChainTower<T> {
    pub fn host(&self) -> &LinOrder<T> {
        &self.host
    }

    pub fn covers(&self) -> &[ChainCover<T>] {
        &self.covers
    }

    pub fn bonding(&self, j: usize, i: usize) -> Option<&BTreeMap<ChainBlock<T>, ChainBlock<T>>> {
        self.bondings.get(&(j, i))
    }

    pub fn thread_of(&self, x: &T) -> Result<Vec<ChainBlock<T>>> {
        self.covers
            .iter()
            .map(|c| c.project(x).cloned().ok_or_else(|| Error::UnknownLabel(show(x))))
            .collect()
    }

    pub fn thread_check(&self, thread: &[ChainBlock<T>]) -> Result<bool> {
        if thread.len() != self.covers.len() {
            return Err(Error::DomainMismatch(format!(
                "thread has {} entries, tower has {} levels",
                thread.len(),
                self.covers.len()
            )));
        }
        Ok(self
            .bondings
            .iter()
            .all(|(&(j, i), f)| f.get(&thread[j]) == Some(&thread[i])))
    }
}

/// The map `X_F -> X_{gF}` induced by an increasing map `g` that may be
/// undefined outside a window; an image block missing from the target
/// cover is a window error.
pub fn induced_chain_action<T: Label>(
    g: impl Fn(&T) -> Option<T>,
    cover: &ChainCover<T>,
) -> Result<(ChainCover<T>, BTreeMap<ChainBlock<T>, ChainBlock<T>>)> {
    let img = |t: &T| g(t).ok_or_else(|| Error::WindowExceeded(show(t)));
    let gf = cover.chain.iter().map(img).collect::<Result<Vec<T>>>()?;
    let target = build_chain_cover(&cover.host, &gf)?;
    if target.chain != gf {
        return Err(Error::NotLop(format!("chain {:?} is not mapped increasingly", cover.chain)));
    }
    let target_blocks: BTreeSet<&ChainBlock<T>> = target.quotient.labels().iter().collect();
    let mut table = BTreeMap::new();
    for b in cover.quotient.labels() {
        let gb = match b {
            ChainBlock::Below(t) => ChainBlock::Below(img(t)?),
            ChainBlock::Point(t) => ChainBlock::Point(img(t)?),
            ChainBlock::Between(a, c) => ChainBlock::Between(img(a)?, img(c)?),
            ChainBlock::Above(t) => ChainBlock::Above(img(t)?),
        };
        if !target_blocks.contains(&gb) {
            return Err(Error::WindowExceeded(format!("{gb:?} is empty in the window")));
        }
        table.insert(b.clone(), gb);
    }
    if !lop_check(&table, &cover.quotient, &target.quotient)? {
        return Err(Error::InvariantViolation("induced chain map is not LOP".into()));
    }
    Ok((target, table))
}

/// Finite-truncation check that quotient orbit maps stay monotone: given
/// the maps of group elements listed in increasing group order, each host
/// orbit map is assumed monotone (checked, a failure is a hypothesis error)
/// and then `g -> π_F(gx)` is checked. Undefined images are skipped.
pub fn quotient_orbit_monotone<T: Label>(
    cover: &ChainCover<T>,
    increasing_elements: &[BTreeMap<T, T>],
) -> Result<Verdict<(usize, usize, T)>> {
    let host = &cover.host;
    for x in host.labels() {
        for (i, gi) in increasing_elements.iter().enumerate() {
            for (j, gj) in increasing_elements.iter().enumerate().skip(i + 1) {
                if let (Some(a), Some(b)) = (gi.get(x), gj.get(x)) {
                    if !host.le(a, b) {
                        return Err(Error::Hypothesis(format!(
                            "orbit map of {x:?} is not monotone at elements {i}, {j}"
                        )));
                    }
                }
            }
        }
    }
    for x in host.labels() {
        for (i, gi) in increasing_elements.iter().enumerate() {
            for (j, gj) in increasing_elements.iter().enumerate().skip(i + 1) {
                if let (Some(a), Some(b)) = (gi.get(x), gj.get(x)) {
                    let (pa, pb) = (&cover.projection[a], &cover.projection[b]);
                    if !cover.quotient.le(pa, pb) {
                        return Ok(Verdict::Fails((i, j, x.clone())));
                    }
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cop::automorphism_group;
    use crate::orders::verify_circular_axioms;
    use crate::Bounds;
    use num_rational::Ratio;

    fn c(n: usize) -> CircOrder<usize> {
        CircOrder::<usize>::standard(n)
    }

    fn p(t: usize) -> Block<usize> {
        Block::Point(t)
    }

    fn iv(a: usize, b: usize) -> Block<usize> {
        Block::Interval(a, b)
    }

    #[test]
    fn cover_examples() {
        let cov = build_cycle_cover(&c(6), &[0, 2, 4]).unwrap();
        assert_eq!(cov.blocks(), &[p(0), iv(0, 2), p(2), iv(2, 4), p(4), iv(4, 0)]);
        assert_eq!(cov.quotient().len(), 6);

        let cov = build_cycle_cover(&c(6), &[0, 3]).unwrap();
        assert_eq!(cov.blocks(), &[p(0), iv(0, 3), p(3), iv(3, 0)]);
        assert_eq!(cov.members(&iv(0, 3)).unwrap(), &[1, 2]);
        assert_eq!(cov.members(&iv(3, 0)).unwrap(), &[4, 5]);

        let cov = build_cycle_cover(&c(5), &[0]).unwrap();
        assert_eq!(cov.blocks(), &[p(0), iv(0, 0)]);
        assert_eq!(cov.members(&iv(0, 0)).unwrap(), &[1, 2, 3, 4]);

        let tight = build_cycle_cover(&c(3), &[2, 0, 1]).unwrap();
        assert_eq!(tight.cycle(), &[0, 1, 2]);
        assert_eq!(tight.blocks().len(), 3);
    }

    #[test]
    fn cover_input_errors() {
        assert!(matches!(build_cycle_cover(&c(4), &[]), Err(Error::EmptyCycle)));
        assert!(matches!(build_cycle_cover(&c(4), &[0, 0]), Err(Error::NotInjective(_))));
        assert!(matches!(build_cycle_cover(&c(4), &[0, 2, 1]), Err(Error::NotACycle(_))));
        assert!(matches!(build_cycle_cover(&c(4), &[9]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn covers_of_small_hosts_are_cop_and_small() {
        for n in 1..=7 {
            let host = c(n);
            for mask in 1u32..(1 << n) {
                let f: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let cov = build_cycle_cover(&host, &f).unwrap();
                assert!(cov.blocks().len() <= 2 * f.len());
                assert!(verify_circular_axioms(&cov.quotient().relation()).unwrap().is_valid());
                assert!(cop_check(cov.projection(), &host, cov.quotient()).unwrap().is_cop());
                let image: BTreeSet<_> = cov.projection().values().collect();
                assert_eq!(image.len(), cov.quotient().len());
            }
        }
    }

    #[test]
    fn join_examples() {
        assert_eq!(join_cycles(&[0, 2], &[1, 4], &c(5)).unwrap(), vec![0, 1, 2, 4]);
        assert_eq!(join_cycles(&[1, 3], &[1, 3], &c(5)).unwrap(), vec![1, 3]);
        assert_eq!(join_cycles(&[0], &[3], &c(6)).unwrap(), vec![0, 3]);
        let twisted = CircOrder::from_cycle(vec![0, 3, 1, 2]).unwrap();
        assert_eq!(join_cycles(&[3], &[1], &twisted).unwrap(), vec![1, 3]);
        assert_eq!(join_cycles(&[0], &[1, 2], &twisted).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn bonding_examples() {
        let host = c(6);
        let c024 = build_cycle_cover(&host, &[0, 2, 4]).unwrap();
        let c03 = build_cycle_cover(&host, &[0, 3]).unwrap();
        let c02 = build_cycle_cover(&host, &[0, 2]).unwrap();
        assert!(matches!(bonding_map(&c024, &c03), Err(Error::NotSubcycle(_, _))));
        let f = bonding_map(&c024, &c02).unwrap();
        for b in [iv(2, 4), p(4), iv(4, 0)] {
            assert_eq!(f.table()[&b], iv(2, 0));
        }
        assert_eq!(f.table()[&iv(0, 2)], iv(0, 2));
        let id = bonding_map(&c024, &c024).unwrap();
        assert!(id.table().iter().all(|(a, b)| a == b));
    }

    #[test]
    fn induced_action_examples() {
        let host = c(6);
        let cov = build_cycle_cover(&host, &[0, 2, 4]).unwrap();
        let r1: BTreeMap<usize, usize> = (0..6).map(|x| (x, (x + 1) % 6)).collect();
        let (target, map) = induced_quotient_action(&r1, &cov).unwrap();
        assert_eq!(target.cycle(), &[1, 3, 5]);
        assert_eq!(map.table()[&iv(4, 0)], iv(5, 1));
        assert!(map.is_bijective());
        let id: BTreeMap<usize, usize> = (0..6).map(|x| (x, x)).collect();
        let (same, idmap) = induced_quotient_action(&id, &cov).unwrap();
        assert_eq!(same, cov);
        assert!(idmap.table().iter().all(|(a, b)| a == b));
        let refl: BTreeMap<usize, usize> = (0..6).map(|x| (x, (6 - x) % 6)).collect();
        assert!(matches!(induced_quotient_action(&refl, &cov), Err(Error::NotCop(_))));
    }

    #[test]
    fn tower_examples() {
        let host = c(6);
        let tower = build_tower(&host, &[vec![0], vec![0, 3], vec![0, 2, 4]], 64).unwrap();
        let cycles: Vec<&[usize]> = tower.covers().iter().map(|c| c.cycle()).collect();
        assert_eq!(cycles, vec![&[0][..], &[0, 3], &[0, 2, 4], &[0, 2, 3, 4]]);
        tower.verify().unwrap();
        for x in 0..6 {
            assert!(tower.thread_check(&tower.thread_of(&x).unwrap()).unwrap());
        }
        // Mixing the top-level block of 1 with the lower-level blocks of 5.
        let mut mixed = tower.thread_of(&5).unwrap();
        mixed[3] = tower.thread_of(&1).unwrap()[3].clone();
        assert!(!tower.thread_check(&mixed).unwrap());
        assert!(matches!(tower.thread_check(&mixed[..2]), Err(Error::DomainMismatch(_))));

        let single = build_tower(&host, &[vec![1, 4]], 8).unwrap();
        assert_eq!(single.len(), 1);
        for b in single.covers()[0].blocks() {
            assert!(single.thread_check(std::slice::from_ref(b)).unwrap());
        }
        assert!(matches!(
            build_tower(&host, &[vec![0], vec![1], vec![2], vec![3]], 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn roots_of_unity_tower() {
        let host = CircOrder::from_cycle((0..12).map(|k| Ratio::new(k, 12)).collect()).unwrap();
        let r = |k: i64| Ratio::new(k, 12);
        let sizes: Vec<usize> = [vec![r(0)], vec![r(0), r(6)], vec![r(0), r(3), r(6), r(9)]]
            .iter()
            .map(|f| build_cycle_cover(&host, f).unwrap().quotient().len())
            .collect();
        assert_eq!(sizes, vec![2, 4, 8]);
    }

    #[test]
    fn full_tower_threads_are_host_points() {
        let host = c(5);
        let tower = build_tower(&host, &[vec![0], vec![1, 3], vec![0, 1, 2, 3, 4]], 64).unwrap();
        let threads = tower.coherent_threads();
        let from_points: BTreeSet<Vec<Block<usize>>> = (0..5).map(|x| tower.thread_of(&x).unwrap()).collect();
        assert_eq!(threads.len(), 5);
        assert_eq!(threads.into_iter().collect::<BTreeSet<_>>(), from_points);
    }

    #[test]
    fn equivariance_over_aut_c6() {
        let host = c(6);
        let tower = build_tower(&host, &[vec![0], vec![0, 3], vec![0, 2, 4], vec![1, 5]], 64).unwrap();
        let aut = automorphism_group(&host, &Bounds::default()).unwrap();
        for g in aut.elements() {
            assert!(tower.equivariance_check(g).unwrap().holds());
        }
    }

    #[test]
    fn dot_has_one_cluster_per_level() {
        let tower = build_tower(&c(6), &[vec![0, 3], vec![0, 2, 4]], 16).unwrap();
        let dot = tower.to_dot();
        assert_eq!(tower.len(), 3);
        assert_eq!(dot.matches("subgraph cluster_").count(), 3);
        assert!(dot.contains("->"));
    }

    #[test]
    fn chain_cover_examples() {
        let host = LinOrder::new((0..10).collect()).unwrap();
        let cov = build_chain_cover(&host, &[6, 3]).unwrap();
        assert_eq!(
            cov.quotient().labels(),
            &[
                ChainBlock::Below(3),
                ChainBlock::Point(3),
                ChainBlock::Between(3, 6),
                ChainBlock::Point(6),
                ChainBlock::Above(6)
            ]
        );
        let all: Vec<usize> = (0..10).collect();
        let full = build_chain_cover(&host, &all).unwrap();
        assert_eq!(full.quotient().len(), 10);
        let tower = build_chain_tower(&host, &[vec![3], vec![3, 6], all.clone()], 16).unwrap();
        for x in 0..10 {
            assert!(tower.thread_check(&tower.thread_of(&x).unwrap()).unwrap());
        }
    }

    #[test]
    fn translation_window_action() {
        let host = LinOrder::new((-10..=10).collect::<Vec<i64>>()).unwrap();
        let shift = |x: &i64| if *x < 10 { Some(x + 1) } else { None };
        let cov = build_chain_cover(&host, &[-2, 4]).unwrap();
        let (target, map) = induced_chain_action(shift, &cov).unwrap();
        assert_eq!(target.chain(), &[-1, 5]);
        assert_eq!(map[&ChainBlock::Between(-2, 4)], ChainBlock::Between(-1, 5));
        let edge = build_chain_cover(&host, &[9]).unwrap();
        assert!(matches!(induced_chain_action(shift, &edge), Err(Error::WindowExceeded(_))));
        let at_top = build_chain_cover(&host, &[10]).unwrap();
        assert!(matches!(induced_chain_action(shift, &at_top), Err(Error::WindowExceeded(_))));

        let translations: Vec<BTreeMap<i64, i64>> = (-3..=3)
            .map(|k| (-10..=10).filter(|x| (-10..=10).contains(&(x + k))).map(|x| (x, x + k)).collect())
            .collect();
        assert!(quotient_orbit_monotone(&cov, &translations).unwrap().holds());
        let mut scrambled = translations.clone();
        scrambled.swap(0, 6);
        assert!(matches!(quotient_orbit_monotone(&cov, &scrambled), Err(Error::Hypothesis(_))));
    }
}
