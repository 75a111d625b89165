//! Kauffman bracket ⟨D⟩ with ⟨O⟩ = 1 and d = −A² − A⁻².

use std::collections::HashMap;

use num_bigint::BigInt;

use super::planar::{Over, PlanarCode};
use super::poly::LaurentPolynomial;
use super::InvariantError;

pub const DEFAULT_CROSSING_LIMIT: usize = 24;

/// Above this the i128 accumulators could overflow.
pub const MAX_CROSSING_LIMIT: usize = 60;

const NONE: u32 = u32::MAX;

/// Slot pairs joined by the A- and B-smoothings of a crossing.
fn smoothings(over: Over) -> [[(usize, usize); 2]; 2] {
    match over {
        Over::Even => [[(1, 2), (3, 0)], [(0, 1), (2, 3)]],
        Over::Odd => [[(2, 3), (0, 1)], [(1, 2), (3, 0)]],
    }
}

fn check_limit(pc: &PlanarCode, limit: usize) -> Result<(), InvariantError> {
    let limit = limit.min(MAX_CROSSING_LIMIT);
    if pc.crossing_count() > limit {
        return Err(InvariantError::TooManyCrossings { crossings: pc.crossing_count(), limit });
    }
    Ok(())
}

pub fn writhe(pc: &PlanarCode) -> i64 {
    pc.writhe()
}

pub fn kauffman_bracket(pc: &PlanarCode) -> Result<LaurentPolynomial, InvariantError> {
    kauffman_bracket_with_limit(pc, DEFAULT_CROSSING_LIMIT)
}

pub fn normalized_bracket(pc: &PlanarCode) -> Result<LaurentPolynomial, InvariantError> {
    normalized_bracket_with_limit(pc, DEFAULT_CROSSING_LIMIT)
}

/// (−A)^(−3w) · ⟨D⟩.
pub fn normalized_bracket_with_limit(pc: &PlanarCode, limit: usize) -> Result<LaurentPolynomial, InvariantError> {
    let b = kauffman_bracket_with_limit(pc, limit)?;
    Ok(normalize(&b, pc.writhe()))
}

pub fn normalize(bracket: &LaurentPolynomial, writhe: i64) -> LaurentPolynomial {
    let factor = -3 * writhe;
    let sign = if factor.rem_euclid(2) == 0 { 1 } else { -1 };
    &bracket.shift(factor) * &LaurentPolynomial::monomial(sign, 0)
}

/// Dense polynomial over a fixed exponent window.
#[derive(Clone)]
struct Dense {
    c: Vec<i128>,
}

impl Dense {
    fn shifted_into(&self, k: isize, loops: usize, out: &mut [i128]) {
        let mut cur: Vec<i128> = vec![0; self.c.len()];
        for (i, &v) in self.c.iter().enumerate() {
            if v != 0 {
                cur[(i as isize + k) as usize] = v;
            }
        }
        for _ in 0..loops {
            let mut next = vec![0; cur.len()];
            for (i, &v) in cur.iter().enumerate() {
                if v != 0 {
                    next[i + 2] -= v;
                    next[i - 2] -= v;
                }
            }
            cur = next;
        }
        for (o, v) in out.iter_mut().zip(cur) {
            *o += v;
        }
    }
}

/// Evaluates the state sum by sweeping crossings in order and merging states
/// that agree on how the open arc ends are paired.
pub fn kauffman_bracket_with_limit(pc: &PlanarCode, limit: usize) -> Result<LaurentPolynomial, InvariantError> {
    check_limit(pc, limit)?;
    let c = pc.crossing_count();
    let d = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
    if c == 0 {
        return Ok(d.pow(pc.free_loops().saturating_sub(1) as u32));
    }
    // Half-edge h = 4k + slot; partner = other end of the same arc.
    let mut ends: Vec<Vec<u32>> = vec![Vec::new(); pc.arc_count()];
    for (k, x) in pc.crossings().iter().enumerate() {
        for (slot, &a) in x.arcs.iter().enumerate() {
            ends[a].push((4 * k + slot) as u32);
        }
    }
    let mut partner = vec![NONE; 4 * c];
    for e in &ends {
        partner[e[0] as usize] = e[1];
        partner[e[1] as usize] = e[0];
    }

    let bound = 5 * c + 2 * pc.components() + 4;
    let width = 2 * bound + 1;
    let mut states: HashMap<Vec<u32>, Dense> = HashMap::new();
    let mut unit = vec![0i128; width];
    unit[bound] = 1;
    states.insert(Vec::new(), Dense { c: unit });

    let mut mate = vec![NONE; 4 * c];
    for (k, x) in pc.crossings().iter().enumerate() {
        let crossing_of = |h: u32| h as usize / 4;
        let mut next: HashMap<Vec<u32>, Dense> = HashMap::new();
        for (key, poly) in &states {
            for (choice, pairs) in smoothings(x.over).iter().enumerate() {
                for pair in key.chunks(2) {
                    mate[pair[0] as usize] = pair[1];
                    mate[pair[1] as usize] = pair[0];
                }
                for &(s, t) in pairs {
                    let (a, b) = ((4 * k + s) as u32, (4 * k + t) as u32);
                    mate[a as usize] = b;
                    mate[b as usize] = a;
                }
                let mut loops = 0;
                for slot in 0..4 {
                    let h = (4 * k + slot) as u32;
                    let p = partner[h as usize];
                    let pk = crossing_of(p);
                    if pk > k || (pk == k && p < h) {
                        continue;
                    }
                    if mate[h as usize] == p {
                        loops += 1;
                    } else {
                        let (a, b) = (mate[h as usize], mate[p as usize]);
                        mate[a as usize] = b;
                        mate[b as usize] = a;
                    }
                    mate[h as usize] = NONE;
                    mate[p as usize] = NONE;
                }
                let mut new_key: Vec<(u32, u32)> = Vec::new();
                let mut touched: Vec<u32> = key.clone();
                touched.extend((0..4).map(|s| (4 * k + s) as u32));
                for &h in &touched {
                    let m = mate[h as usize];
                    if m != NONE && h < m {
                        new_key.push((h, m));
                    }
                }
                for &h in &touched {
                    mate[h as usize] = NONE;
                }
                new_key.sort_unstable();
                let flat: Vec<u32> = new_key.into_iter().flat_map(|(a, b)| [a, b]).collect();
                let shift = if choice == 0 { 1 } else { -1 };
                let slot = next.entry(flat).or_insert_with(|| Dense { c: vec![0; width] });
                poly.shifted_into(shift, loops, &mut slot.c);
            }
        }
        states = next;
    }
    let total = states.remove(&Vec::new()).expect("all arcs closed after the sweep");
    let mut p = LaurentPolynomial::from_terms(
        total.c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i as i64 - bound as i64, BigInt::from(v))),
    );
    p = &p * &d.pow(pc.free_loops() as u32);
    Ok(divide_by_loop(&p))
}

/// Exact division by d = −A²−A⁻² = −A⁻²(1 + A⁴).
fn divide_by_loop(p: &LaurentPolynomial) -> LaurentPolynomial {
    let Some(lo) = p.min_exp() else {
        return LaurentPolynomial::zero();
    };
    let hi = p.max_exp().unwrap();
    let len = (hi - lo + 1) as usize;
    let mut q: Vec<BigInt> = vec![BigInt::default(); len];
    for i in 0..len {
        let mut v = p.coeff(lo + i as i64);
        if i >= 4 {
            v -= &q[i - 4];
        }
        q[i] = v;
    }
    // The top four quotient slots must vanish for the division to be exact.
    debug_assert!(q[len.saturating_sub(4)..].iter().all(|v| *v == BigInt::default()) || len < 4);
    let quotient = LaurentPolynomial::from_terms(q.into_iter().enumerate().map(|(i, v)| (lo + i as i64, v)));
    -&quotient.shift(2)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The literal 2^c state sum: each state resolves every crossing, loops are
/// counted with union-find over arcs.
pub fn state_sum(pc: &PlanarCode, limit: usize) -> Result<LaurentPolynomial, InvariantError> {
    check_limit(pc, limit)?;
    let c = pc.crossing_count();
    let d = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
    if c == 0 {
        return Ok(d.pow(pc.free_loops().saturating_sub(1) as u32));
    }
    let arcs = pc.arc_count();
    let max_loops = arcs + pc.free_loops();
    // tally[a_count][loops]
    let mut tally = vec![vec![0u64; max_loops + 1]; c + 1];
    let mut parent = vec![0; arcs];
    for state in 0u64..(1u64 << c) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut a_count = 0;
        for (k, x) in pc.crossings().iter().enumerate() {
            let choice = ((state >> k) & 1) as usize;
            if choice == 0 {
                a_count += 1;
            }
            for &(s, t) in &smoothings(x.over)[choice] {
                let (ra, rb) = (find(&mut parent, x.arcs[s]), find(&mut parent, x.arcs[t]));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let loops = (0..arcs).filter(|&i| find(&mut parent, i) == i).count() + pc.free_loops();
        tally[a_count][loops] += 1;
    }
    let mut out = LaurentPolynomial::zero();
    let mut d_pows = vec![LaurentPolynomial::one()];
    for i in 1..=max_loops {
        d_pows.push(&d_pows[i - 1] * &d);
    }
    for (a_count, row) in tally.iter().enumerate() {
        let exp = 2 * a_count as i64 - c as i64;
        for (loops, &count) in row.iter().enumerate() {
            if count > 0 {
                let term = LaurentPolynomial::monomial(BigInt::from(count), exp);
                out = &out + &(&term * &d_pows[loops - 1]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDiagram;
    use crate::invariants::planar::CodeCrossing;

    fn p(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    fn kink(over: Over, sign: i8) -> PlanarCode {
        // One crossing whose slots 0 and 1 are joined by a loop arc.
        let c = CodeCrossing { arcs: [0, 0, 1, 1], over, sign };
        PlanarCode::new(vec![c], 0, 1).unwrap()
    }

    #[test]
    fn loop_and_kinks() {
        let u = GridDiagram::new(vec![2, 1], vec![1, 2]).unwrap();
        let pc = PlanarCode::from_grid(&u);
        assert!(kauffman_bracket(&pc).unwrap().is_one());
        // Hand state sum: A-smoothing of a kink with over = (0,2) joins 1-2 and
        // 3-0: one loop. B joins 0-1 and 2-3: two loops.
        let k = kink(Over::Even, 1);
        let expected = &p(&[(1, 1)]) + &(&p(&[(-1, 1)]) * &p(&[(2, -1), (-2, -1)]));
        assert_eq!(kauffman_bracket(&k).unwrap(), expected);
        assert_eq!(expected, p(&[(-3, -1)]));
        assert_eq!(kauffman_bracket(&kink(Over::Odd, -1)).unwrap(), p(&[(3, -1)]));
        assert_eq!(state_sum(&k, 24).unwrap(), expected);
    }

    #[test]
    fn right_handed_trefoil() {
        let g = GridDiagram::new(vec![2, 3, 4, 5, 1], vec![5, 1, 2, 3, 4]).unwrap();
        let mut pc = PlanarCode::from_grid(&g);
        if pc.writhe() < 0 {
            pc = pc.mirror();
        }
        assert_eq!(pc.writhe(), 3);
        let b = kauffman_bracket(&pc).unwrap();
        assert_eq!(b.terms().count(), 3);
        assert_eq!(normalized_bracket(&pc).unwrap(), p(&[(-4, 1), (-12, 1), (-16, -1)]));
        assert_eq!(state_sum(&pc, 24).unwrap(), b);
    }

    #[test]
    fn limit_enforced() {
        let g = GridDiagram::new(vec![2, 3, 4, 5, 1], vec![5, 1, 2, 3, 4]).unwrap();
        let pc = PlanarCode::from_grid(&g);
        assert_eq!(
            kauffman_bracket_with_limit(&pc, 2),
            Err(InvariantError::TooManyCrossings { crossings: 3, limit: 2 })
        );
    }
}
