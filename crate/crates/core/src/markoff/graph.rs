use super::field::{Field, Fp2};
use crate::error::{Error, Result};

/// Default largest prime `build_graph` accepts.
pub const DEFAULT_GRAPH_CAP: u64 = 5000;

/// A solution of `a^2 + b^2 + c^2 = abc` over `F_p`, not all zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkoffTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl MarkoffTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Self {
        MarkoffTriple { a, b, c }
    }

    pub fn coords(&self) -> [u64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_solution(&self, p: u64) -> bool {
        let (a, b, c) = (self.a as u128, self.b as u128, self.c as u128);
        let p = p as u128;
        let lhs = (a * a % p + b * b % p + c * c % p) % p;
        let rhs = a * b % p * c % p;
        lhs == rhs && (a, b, c) != (0, 0, 0)
    }

    /// Negates the two coordinates other than `keep` (0, 1 or 2).
    pub fn negate_pair(&self, keep: usize, p: u64) -> Self {
        let neg = |x: u64| if x == 0 { 0 } else { p - x };
        match keep {
            0 => MarkoffTriple::new(self.a, neg(self.b), neg(self.c)),
            1 => MarkoffTriple::new(neg(self.a), self.b, neg(self.c)),
            2 => MarkoffTriple::new(neg(self.a), neg(self.b), self.c),
            _ => panic!("coordinate index {keep} out of range"),
        }
    }
}

/// The Vieta involution `R_i`, `i` in `1..=3`: replaces coordinate `i` by the
/// product of the other two minus itself.
pub fn apply_involution(p: u64, i: usize, t: MarkoffTriple) -> MarkoffTriple {
    let m = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let vieta = |x: u64, y: u64, z: u64| (m(x, y) + p - z % p) % p;
    let MarkoffTriple { a, b, c } = t;
    match i {
        1 => MarkoffTriple::new(vieta(b, c, a), b, c),
        2 => MarkoffTriple::new(a, vieta(a, c, b), c),
        3 => MarkoffTriple::new(a, b, vieta(a, b, c)),
        _ => panic!("involution index {i} out of range"),
    }
}

/// All nonzero solutions mod `p` with their connected components under
/// `R_1, R_2, R_3`.
///
/// `R_3` swaps the two roots `c` over a fixed `(a, b)`, so components are
/// tracked on `(a, b)` pairs and vertices are recovered on demand.
pub struct MarkoffGraph {
    p: u64,
    sqrt: Vec<u32>,
    /// Component per `(a, b)` pair, `NONE` when no `c` solves.
    label: Vec<u32>,
    sizes: Vec<u64>,
    vertex_count: u64,
}

const NONE: u32 = u32::MAX;

impl MarkoffGraph {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    /// Vertex count of each component, indexed by component id.
    pub fn component_sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn is_connected(&self) -> bool {
        self.sizes.len() == 1
    }

    /// Id of the largest component, smallest id on ties.
    pub fn largest_component(&self) -> Option<u32> {
        (0..self.sizes.len() as u32).max_by_key(|&i| (self.sizes[i as usize], std::cmp::Reverse(i)))
    }

    pub fn component_of(&self, t: &MarkoffTriple) -> Option<u32> {
        if t.a >= self.p || t.b >= self.p || t.c >= self.p || !t.is_solution(self.p) {
            return None;
        }
        let l = self.label[(t.a * self.p + t.b) as usize];
        (l != NONE).then_some(l)
    }

    pub fn contains(&self, t: &MarkoffTriple) -> bool {
        self.component_of(t).is_some()
    }

    /// Roots `c` over `(a, b)`, ascending.
    fn roots(&self, a: u64, b: u64) -> ([u64; 2], usize) {
        roots(self.p, &self.sqrt, a, b)
    }

    pub fn vertices(&self) -> impl Iterator<Item = MarkoffTriple> + '_ {
        let p = self.p;
        (0..p * p).flat_map(move |idx| {
            let (a, b) = (idx / p, idx % p);
            let (cs, k) = self.roots(a, b);
            (0..k).map(move |i| MarkoffTriple::new(a, b, cs[i]))
        })
    }

    /// Whether every component size is divisible by `p`.
    pub fn sizes_divisible_by_p(&self) -> bool {
        self.sizes.iter().all(|s| s % self.p == 0)
    }

    /// Vertices outside the largest component.
    pub fn outside_largest(&self) -> u64 {
        self.vertex_count - self.largest_component().map_or(0, |i| self.sizes[i as usize])
    }

    /// Negating any two coordinates maps the vertex set onto itself and
    /// sends each component into a single component.
    pub fn negation_closed(&self) -> bool {
        let n = self.sizes.len();
        let mut image = vec![[NONE; 3]; n];
        for t in self.vertices() {
            let from = self.component_of(&t).expect("listed vertex") as usize;
            for keep in 0..3 {
                let Some(to) = self.component_of(&t.negate_pair(keep, self.p)) else {
                    return false;
                };
                let slot = &mut image[from][keep];
                if *slot == NONE {
                    *slot = to;
                } else if *slot != to {
                    return false;
                }
            }
        }
        // each negation is an involution on vertices, so the component map
        // must be a bijection as well
        (0..3).all(|keep| {
            let mut seen = vec![false; n];
            image.iter().all(|img| {
                let to = img[keep] as usize;
                !std::mem::replace(&mut seen[to], true)
            })
        })
    }
}

fn roots(p: u64, sqrt: &[u32], a: u64, b: u64) -> ([u64; 2], usize) {
    let m = |x: u64, y: u64| x * y % p;
    if p == 2 {
        let mut out = [0; 2];
        let mut k = 0;
        for c in 0..2 {
            if MarkoffTriple::new(a, b, c).is_solution(2) {
                out[k] = c;
                k += 1;
            }
        }
        return (out, k);
    }
    // c^2 - ab c + (a^2 + b^2) = 0
    let ab = m(a, b);
    let disc = (m(ab, ab) + 4 * (p - (m(a, a) + m(b, b)) % p)) % p;
    let r = sqrt[disc as usize];
    if r == NONE {
        return ([0; 2], 0);
    }
    let half = p.div_ceil(2);
    let c1 = m((ab + r as u64) % p, half);
    let c2 = m((ab + p - r as u64) % p, half);
    let (lo, hi) = (c1.min(c2), c1.max(c2));
    let nonzero = |c: u64| a != 0 || b != 0 || c != 0;
    match (lo == hi, nonzero(lo), nonzero(hi)) {
        (true, true, _) => ([lo, lo], 1),
        (true, false, _) => ([0; 2], 0),
        (false, true, true) => ([lo, hi], 2),
        (false, false, true) => ([hi, hi], 1),
        (false, true, false) => ([lo, lo], 1),
        (false, false, false) => ([0; 2], 0),
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, x: u32, y: u32) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            let (lo, hi) = (rx.min(ry), rx.max(ry));
            self.parent[hi as usize] = lo;
        }
    }
}

pub fn build_graph(p: u64) -> Result<MarkoffGraph> {
    build_graph_with_cap(p, DEFAULT_GRAPH_CAP)
}

pub fn build_graph_with_cap(p: u64, cap: u64) -> Result<MarkoffGraph> {
    if p > cap {
        return Err(Error::CapExceeded {
            what: "p for the brute-force graph",
            size: p.into(),
            cap,
        });
    }
    if p < 2 || !crate::arith::is_prime_u64(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not prime")));
    }
    let mut sqrt = vec![NONE; p as usize];
    for y in 0..p {
        sqrt[(y * y % p) as usize] = y as u32;
    }
    let nodes = (p * p) as usize;
    let mut uf = UnionFind {
        parent: (0..nodes as u32).collect(),
    };
    let mut weight = vec![0u8; nodes];
    let node = |a: u64, b: u64| (a * p + b) as u32;
    for a in 0..p {
        for b in 0..p {
            let (cs, k) = roots(p, &sqrt, a, b);
            weight[node(a, b) as usize] = k as u8;
            for &c in &cs[..k] {
                let t = MarkoffTriple::new(a, b, c);
                let r1 = apply_involution(p, 1, t);
                let r2 = apply_involution(p, 2, t);
                uf.union(node(a, b), node(r1.a, r1.b));
                uf.union(node(a, b), node(r2.a, r2.b));
            }
        }
    }
    let mut label = vec![NONE; nodes];
    let mut sizes = Vec::new();
    let mut vertex_count = 0u64;
    for i in 0..nodes {
        if weight[i] == 0 {
            continue;
        }
        let root = uf.find(i as u32) as usize;
        // roots precede their members, so the root is labelled first
        if label[root] == NONE {
            label[root] = sizes.len() as u32;
            sizes.push(0);
        }
        let l = label[root];
        label[i] = l;
        sizes[l as usize] += weight[i] as u64;
        vertex_count += weight[i] as u64;
    }
    Ok(MarkoffGraph {
        p,
        sqrt,
        label,
        sizes,
        vertex_count,
    })
}

/// Outcome of recovering `(r, s)` from a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundTrip {
    /// `a` is `0` or `+-2`, where the parameterization does not apply.
    Excluded,
    /// The recovered `(r, s)` reproduces `c` or its partner `ab - c`.
    Reproduced,
    Mismatch,
}

/// Solves `a = r + 1/r`, then `b = a (s + 1/s) / (r - 1/r)`, and checks that
/// `a (rs + 1/(rs)) / (r - 1/r)` is one of the two roots over `(a, b)`.
pub fn parameterization_round_trip(field: &Field, t: &MarkoffTriple) -> RoundTrip {
    let p = field.p();
    let a = t.a % p;
    if a == 0 || a == 2 % p || a == p - 2 {
        return RoundTrip::Excluded;
    }
    let r = field.root_of_trace(a);
    let r_inv = field.inv2(r).expect("unit");
    let delta = field.sub2(r, r_inv);
    let af = Fp2::from_fp(a);
    // s + 1/s = b delta / a
    let beta = field.div2(field.mul2(Fp2::from_fp(t.b), delta), af).expect("a != 0");
    let disc = field.sub2(field.mul2(beta, beta), Fp2::from_fp(4 % p));
    debug_assert!(disc.in_base_field());
    let half = field.inv(2).expect("p odd");
    let sq = field.sqrt_in_ext(disc.u);
    let s2 = field.add2(beta, sq);
    let s = Fp2 {
        u: field.mul(s2.u, half),
        v: field.mul(s2.v, half),
    };
    let coord = |x: Fp2| {
        let sum = field.add2(x, field.inv2(x).expect("unit"));
        field.div2(field.mul2(af, sum), delta).expect("r != 1/r")
    };
    if coord(s) != Fp2::from_fp(t.b) {
        return RoundTrip::Mismatch;
    }
    let c = coord(field.mul2(r, s));
    let partner = field.sub(field.mul(a, t.b), t.c);
    if c == Fp2::from_fp(t.c) || c == Fp2::from_fp(partner) {
        RoundTrip::Reproduced
    } else {
        RoundTrip::Mismatch
    }
}
