//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..order`. Every constructor in this module puts the
//! identity at index 0; explicit tables may place it anywhere.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GroupError;
use crate::root::UnitRoot;

pub const MAX_ORDER: usize = 512;

/// Recipe for a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Vec<GroupSpec>),
    Dihedral(usize),
    Symmetric(usize),
    /// Row-major table, `table[a][b] = a·b`.
    Explicit(Vec<Vec<usize>>),
}

#[derive(Debug, PartialEq, Eq)]
struct GroupData {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Immutable finite group; cloning shares the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub elements: Vec<usize>,
    pub centralizer_order: usize,
}

/// Conjugacy classes ordered by smallest member, plus the class of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    pub classes: Vec<ConjugacyClass>,
    pub class_of: Vec<usize>,
}

impl FiniteGroup {
    pub fn build(spec: &GroupSpec) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Cyclic(n) => Self::cyclic(*n),
            GroupSpec::Product(parts) => {
                let groups = parts.iter().map(Self::build).collect::<Result<Vec<_>, _>>()?;
                Self::product(&groups)
            }
            GroupSpec::Dihedral(n) => Self::dihedral(*n),
            GroupSpec::Symmetric(n) => Self::symmetric(*n),
            GroupSpec::Explicit(rows) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(GroupError::Spec("explicit table is not square".into()));
                }
                Self::from_table(n, rows.iter().flatten().copied().collect())
            }
        }
    }

    /// Validates a row-major table and derives identity and inverses.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Spec("empty group".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        if table.len() != order * order {
            return Err(GroupError::Spec("table size does not match order".into()));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(GroupError::OutOfRange(bad));
        }
        let at = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| at(a, b) == identity && at(b, a) == identity) {
                Some(b) => inverse[a] = b,
                None => return Err(GroupError::NotInvertible(a)),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self::from_parts(order, table, identity, inverse))
    }

    fn from_parts(order: usize, table: Vec<usize>, identity: usize, inverse: Vec<usize>) -> Self {
        FiniteGroup {
            data: Arc::new(GroupData {
                order,
                table,
                identity,
                inverse,
            }),
        }
    }

    /// Builds from a trusted multiplication closure with identity at 0.
    fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order).find(|&b| table[a * order + b] == 0).unwrap();
        }
        Self::from_parts(order, table, 0, inverse)
    }

    /// Residues mod `n` under addition.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Spec("cyclic(0)".into()));
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        Ok(Self::from_fn(n, |a, b| (a + b) % n))
    }

    /// Direct product in lexicographic order: the first factor is most significant.
    pub fn product(factors: &[FiniteGroup]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Self::cyclic(1);
        }
        let order = factors.iter().try_fold(1usize, |acc, g| {
            acc.checked_mul(g.order()).filter(|&o| o <= MAX_ORDER)
        });
        let order = order.ok_or(GroupError::TooLarge(usize::MAX))?;
        let split = |mut x: usize| {
            let mut digits = vec![0; factors.len()];
            for (i, g) in factors.iter().enumerate().rev() {
                digits[i] = x % g.order();
                x /= g.order();
            }
            digits
        };
        // Identity of each factor sits at index 0, so the product identity is 0 too.
        if factors.iter().any(|g| g.identity() != 0) {
            return Err(GroupError::Spec("product factors must have identity 0".into()));
        }
        Ok(Self::from_fn(order, |a, b| {
            let (da, db) = (split(a), split(b));
            factors
                .iter()
                .zip(da.iter().zip(db.iter()))
                .fold(0, |acc, (g, (&x, &y))| acc * g.order() + g.mul(x, y))
        }))
    }

    /// Symmetries of the regular `n`-gon, order `2n`. Index `k + n·e` is `r^k s^e`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Spec("dihedral(0)".into()));
        }
        if 2 * n > MAX_ORDER {
            return Err(GroupError::TooLarge(2 * n));
        }
        Ok(Self::from_fn(2 * n, |a, b| {
            let (k1, e1) = (a % n, a / n);
            let (k2, e2) = (b % n, b / n);
            let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
            (k % n) + n * ((e1 + e2) % 2)
        }))
    }

    /// Permutations of `{0..n}` in lexicographic order of one-line notation,
    /// composed as functions: `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::Spec(format!("symmetric({n}) outside 1..=5")));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
        Ok(Self::from_fn(perms.len(), |a, b| {
            let (s, t) = (&perms[a], &perms[b]);
            let c: Vec<usize> = (0..n).map(|i| s[t[i]]).collect();
            index(&c)
        }))
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn identity(&self) -> usize {
        self.data.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.data.table[a * self.data.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.data.inverse[a]
    }

    /// `g h g⁻¹`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.order()
    }

    /// Non-identity elements in increasing order.
    pub fn nontrivial(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&g| g != self.identity())
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| self.data.table[a * n..(a + 1) * n].to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        self.elements()
            .filter(|&h| self.mul(g, h) == self.mul(h, g))
            .collect()
    }

    pub fn conjugacy_classes(&self) -> ClassPartition {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let members: BTreeSet<usize> = self.elements().map(|x| self.conj(x, g)).collect();
            let idx = classes.len();
            for &m in &members {
                class_of[m] = idx;
            }
            let elements: Vec<usize> = members.into_iter().collect();
            let centralizer_order = n / elements.len();
            classes.push(ConjugacyClass {
                elements,
                centralizer_order,
            });
        }
        ClassPartition { classes, class_of }
    }

    /// Smallest subgroup containing `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut stack = vec![self.identity()];
        seen[self.identity()] = true;
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        self.elements().filter(|&g| seen[g]).collect()
    }

    /// Greedy generating set: each generator is the smallest element outside
    /// the span of the previous ones.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity()];
        while span.len() < self.order() {
            let next = self.elements().find(|g| span.binary_search(g).is_err()).unwrap();
            gens.push(next);
            span = self.generated_subgroup(&gens);
        }
        gens
    }

    /// Validates that `subset` is a subgroup; returns it sorted and deduplicated.
    pub fn check_subgroup(&self, subset: &[usize]) -> Result<Vec<usize>, GroupError> {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&x| x >= self.order()) {
            return Err(GroupError::OutOfRange(bad));
        }
        if !set.contains(&self.identity()) {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        for &a in &set {
            for &b in &set {
                let ab = self.mul(a, b);
                if !set.contains(&ab) {
                    return Err(GroupError::NotSubgroup(format!(
                        "{a}·{b} = {ab} is not in the subset"
                    )));
                }
            }
        }
        Ok(set.into_iter().collect())
    }

    /// Validates that `subset` is a normal subgroup.
    pub fn check_normal(&self, subset: &[usize]) -> Result<Vec<usize>, GroupError> {
        let h = self.check_subgroup(subset)?;
        for g in self.elements() {
            for &x in &h {
                if h.binary_search(&self.conj(g, x)).is_err() {
                    return Err(GroupError::NotNormal { g, h: x });
                }
            }
        }
        Ok(h)
    }

    /// The subgroup as a group in its own right (elements renumbered in
    /// increasing order) and its inclusion.
    pub fn subgroup(&self, subset: &[usize]) -> Result<(FiniteGroup, GroupHom), GroupError> {
        let h = self.check_subgroup(subset)?;
        let pos = |x: usize| h.binary_search(&x).unwrap();
        let k = h.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &h {
            for &b in &h {
                table.push(pos(self.mul(a, b)));
            }
        }
        let inverse = h.iter().map(|&a| pos(self.inv(a))).collect();
        let sub = Self::from_parts(k, table, pos(self.identity()), inverse);
        let incl = GroupHom {
            source: sub.clone(),
            target: self.clone(),
            images: h,
        };
        Ok((sub, incl))
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = self
            .elements()
            .flat_map(|a| {
                self.elements()
                    .map(move |b| (a, b))
            })
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect();
        let comms: Vec<usize> = comms.into_iter().collect();
        self.generated_subgroup(&comms)
    }

    /// Left cosets `gH`. The coset of the identity comes first with the
    /// identity as representative; the others are ordered by, and
    /// represented by, their smallest element.
    pub fn left_cosets(&self, subgroup: &[usize]) -> Result<Cosets, GroupError> {
        let h = self.check_subgroup(subgroup)?;
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = vec![self.identity()];
        for &x in &h {
            coset_of[x] = 0;
        }
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &x in &h {
                coset_of[self.mul(g, x)] = idx;
            }
        }
        Ok(Cosets {
            representatives: reps,
            coset_of,
            subgroup: h,
        })
    }

    /// All homomorphisms `G → ℚ/ℤ`, sorted with the zero character first.
    pub fn dual_group(&self) -> Vec<Character> {
        let gens = self.generators();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let vals: Vec<UnitRoot> = choice
                .iter()
                .zip(&orders)
                .map(|(&k, &o)| UnitRoot::new(k as i64, o as i64))
                .collect();
            if let Some(values) = self.extend_character(&gens, &vals) {
                out.push(Character { values });
            }
            // Odometer over generator values.
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return out;
                }
                choice[i] += 1;
                if choice[i] < orders[i] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// `G^∨` as a group under pointwise addition, numbered as in
    /// [`FiniteGroup::dual_group`].
    pub fn dual_as_group(&self) -> (FiniteGroup, Vec<Character>) {
        let chars = self.dual_group();
        let k = chars.len();
        let mut table = Vec::with_capacity(k * k);
        for a in &chars {
            for b in &chars {
                let s = a.add(b);
                table.push(chars.iter().position(|c| *c == s).expect("dual group is closed"));
            }
        }
        let g = FiniteGroup::from_table(k, table).expect("dual group table is a group");
        (g, chars)
    }

    fn extend_character(&self, gens: &[usize], vals: &[UnitRoot]) -> Option<Vec<UnitRoot>> {
        let mut values: Vec<Option<UnitRoot>> = vec![None; self.order()];
        values[self.identity()] = Some(UnitRoot::ZERO);
        let mut stack = vec![self.identity()];
        while let Some(x) = stack.pop() {
            let vx = values[x].unwrap();
            for (&s, &vs) in gens.iter().zip(vals) {
                let y = self.mul(x, s);
                let vy = vx + vs;
                match values[y] {
                    None => {
                        values[y] = Some(vy);
                        stack.push(y);
                    }
                    Some(v) if v != vy => return None,
                    _ => {}
                }
            }
        }
        Some(values.into_iter().map(Option::unwrap).collect())
    }

    /// `G/H` with cosets numbered as in [`FiniteGroup::left_cosets`], and the projection.
    pub fn quotient(&self, subset: &[usize]) -> Result<(FiniteGroup, GroupHom), GroupError> {
        let h = self.check_normal(subset)?;
        let cosets = self.left_cosets(&h)?;
        let k = cosets.representatives.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &cosets.representatives {
            for &b in &cosets.representatives {
                table.push(cosets.coset_of[self.mul(a, b)]);
            }
        }
        let inverse = cosets
            .representatives
            .iter()
            .map(|&a| cosets.coset_of[self.inv(a)])
            .collect();
        let q = Self::from_parts(k, table, 0, inverse);
        let proj = GroupHom {
            source: self.clone(),
            target: q.clone(),
            images: cosets.coset_of,
        };
        Ok((q, proj))
    }
}

/// Left cosets of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cosets {
    pub representatives: Vec<usize>,
    pub coset_of: Vec<usize>,
    pub subgroup: Vec<usize>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        if images.len() != source.order() {
            return Err(GroupError::Spec("image list has wrong length".into()));
        }
        if let Some(&bad) = images.iter().find(|&&x| x >= target.order()) {
            return Err(GroupError::OutOfRange(bad));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            images: g.elements().collect(),
        }
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn check_surjective(&self) -> Result<(), GroupError> {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.images {
            hit[x] = true;
        }
        match hit.iter().position(|&h| !h) {
            Some(missed) => Err(GroupError::NotSurjective(missed)),
            None => Ok(()),
        }
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&g| self.images[g] == self.target.identity())
            .collect()
    }
}

/// A homomorphism `G → ℚ/ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Character {
    pub values: Vec<UnitRoot>,
}

impl Character {
    pub fn trivial(g: &FiniteGroup) -> Self {
        Character {
            values: vec![UnitRoot::ZERO; g.order()],
        }
    }

    pub fn eval(&self, g: usize) -> UnitRoot {
        self.values[g]
    }

    pub fn add(&self, other: &Character) -> Character {
        Character {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Character {
        Character {
            values: self.values.iter().map(|&a| -a).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        g.elements().all(|a| {
            g.elements()
                .all(|b| self.values[g.mul(a, b)] == self.values[a] + self.values[b])
        })
    }
}
