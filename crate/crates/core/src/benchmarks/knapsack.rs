//! 0-1 knapsack: exact solvers, the Dantzig greedy baseline and the repair
//! decoder used by the genetic algorithm.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::engine::{rng_stream, Genome, Objective, GENERATOR_STREAM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub value: f64,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub items: Vec<Item>,
    pub capacity: u64,
}

/// An item selection and its total value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackSolution {
    pub value: f64,
    /// Chosen item indices, ascending.
    pub items: Vec<usize>,
}

impl KnapsackSolution {
    fn from_mask(instance: &KnapsackInstance, chosen: &[bool]) -> Self {
        let items: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| c.then_some(i))
            .collect();
        let value = items.iter().map(|&i| instance.items[i].value).sum();
        Self { value, items }
    }
}

impl KnapsackInstance {
    pub fn new(items: Vec<Item>, capacity: u64) -> Result<Self, BenchmarkError> {
        for (i, item) in items.iter().enumerate() {
            if item.weight == 0 {
                return Err(BenchmarkError::InvalidInstance(format!("item {i} has zero weight")));
            }
            if !(item.value.is_finite() && item.value >= 0.0) {
                return Err(BenchmarkError::InvalidInstance(format!(
                    "item {i} has value {}",
                    item.value
                )));
            }
        }
        Ok(Self { items, capacity })
    }

    pub fn from_pairs(pairs: &[(f64, u64)], capacity: u64) -> Result<Self, BenchmarkError> {
        Self::new(
            pairs
                .iter()
                .map(|&(value, weight)| Item { value, weight })
                .collect(),
            capacity,
        )
    }

    /// Values and weights uniform integers in `[1, 100]`, capacity
    /// `ceil(tightness * total weight)`.
    pub fn random_uniform(n: usize, tightness: f64, seed: u64) -> Self {
        let mut rng = rng_stream(seed, GENERATOR_STREAM);
        let items: Vec<Item> = (0..n)
            .map(|_| Item {
                value: rng.random_range(1..=100u32) as f64,
                weight: rng.random_range(1..=100u64),
            })
            .collect();
        let total: u64 = items.iter().map(|it| it.weight).sum();
        let capacity = (tightness * total as f64).ceil().max(0.0) as u64;
        Self { items, capacity }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_weight(&self, chosen: &[usize]) -> u64 {
        chosen.iter().map(|&i| self.items[i].weight).sum()
    }

    pub fn is_feasible(&self, chosen: &[usize]) -> bool {
        self.total_weight(chosen) <= self.capacity
    }

    fn ratio(&self, i: usize) -> f64 {
        self.items[i].value / self.items[i].weight as f64
    }

    /// Indices by non-increasing value/weight ratio; equal ratios keep index order.
    pub fn ratio_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.ratio(b).total_cmp(&self.ratio(a)).then(a.cmp(&b)));
        order
    }
}

/// Default cap on DP table cells, `(n + 1) * (W + 1)`.
pub const DEFAULT_DP_CELL_CAP: u64 = 100_000_000;

pub fn knapsack_dp(instance: &KnapsackInstance) -> Result<KnapsackSolution, BenchmarkError> {
    knapsack_dp_capped(instance, DEFAULT_DP_CELL_CAP)
}

/// Pseudo-polynomial dynamic program over capacities, O(nW) time.
///
/// The `(n + 1) × (W + 1)` table is kept as one rolling row of values plus
/// one bit per cell recording whether item `i` is taken at capacity `c`,
/// which is enough to walk the optimal choice back.
pub fn knapsack_dp_capped(
    instance: &KnapsackInstance,
    cell_cap: u64,
) -> Result<KnapsackSolution, BenchmarkError> {
    let n = instance.len();
    let cap = instance.capacity;
    let cells = (n as u64 + 1)
        .checked_mul(cap.saturating_add(1))
        .unwrap_or(u64::MAX);
    if cells > cell_cap {
        return Err(BenchmarkError::CapacityOverflow { cells, cap: cell_cap });
    }
    let width = cap as usize + 1;
    let mut best = vec![0.0f64; width];
    let mut take = vec![false; n * width];
    for (i, item) in instance.items.iter().enumerate() {
        let w = item.weight as usize;
        if w > cap as usize {
            continue;
        }
        let row = &mut take[i * width..(i + 1) * width];
        for c in (w..width).rev() {
            let with = best[c - w] + item.value;
            if with > best[c] {
                best[c] = with;
                row[c] = true;
            }
        }
    }
    let mut chosen = vec![false; n];
    let mut c = cap as usize;
    for i in (0..n).rev() {
        if take[i * width + c] {
            chosen[i] = true;
            c -= instance.items[i].weight as usize;
        }
    }
    Ok(KnapsackSolution::from_mask(instance, &chosen))
}

pub const BRUTE_FORCE_MAX_ITEMS: usize = 25;

/// Enumerates all 2^n subsets. Ties keep the subset with the smallest bitmask.
pub fn knapsack_brute_force(instance: &KnapsackInstance) -> Result<KnapsackSolution, BenchmarkError> {
    let n = instance.len();
    if n > BRUTE_FORCE_MAX_ITEMS {
        return Err(BenchmarkError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_ITEMS,
        });
    }
    let mut best_value = 0.0;
    let mut best_mask = 0u64;
    for mask in 0u64..(1u64 << n) {
        let mut weight = 0u64;
        let mut value = 0.0;
        for (i, item) in instance.items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                weight += item.weight;
                value += item.value;
            }
        }
        if weight <= instance.capacity && value > best_value {
            best_value = value;
            best_mask = mask;
        }
    }
    let chosen: Vec<bool> = (0..n).map(|i| best_mask >> i & 1 == 1).collect();
    Ok(KnapsackSolution::from_mask(instance, &chosen))
}

/// Dantzig's greedy: take items by non-increasing value/weight ratio and stop
/// at the first item that does not fit.
pub fn knapsack_greedy_dantzig(instance: &KnapsackInstance) -> KnapsackSolution {
    let mut chosen = vec![false; instance.len()];
    let mut load = 0u64;
    for i in instance.ratio_order() {
        let w = instance.items[i].weight;
        if load + w > instance.capacity {
            break;
        }
        load += w;
        chosen[i] = true;
    }
    KnapsackSolution::from_mask(instance, &chosen)
}

pub const MEET_IN_MIDDLE_MAX_ITEMS: usize = 40;

#[derive(Clone, Copy)]
struct Subset {
    weight: u64,
    value: f64,
    mask: u64,
}

fn enumerate_half(items: &[Item], capacity: u64) -> Vec<Subset> {
    let mut out = Vec::with_capacity(1 << items.len());
    for mask in 0u64..(1u64 << items.len()) {
        let mut weight = 0u64;
        let mut value = 0.0;
        for (i, item) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                weight += item.weight;
                value += item.value;
            }
        }
        if weight <= capacity {
            out.push(Subset { weight, value, mask });
        }
    }
    out
}

/// Horowitz–Sahni: enumerate both halves, keep the Pareto front of the
/// second half (weight ascending, value strictly ascending), and pair each
/// first-half subset with the best fitting second-half subset by binary
/// search.
pub fn knapsack_meet_in_middle(
    instance: &KnapsackInstance,
) -> Result<KnapsackSolution, BenchmarkError> {
    let n = instance.len();
    if n > MEET_IN_MIDDLE_MAX_ITEMS {
        return Err(BenchmarkError::TooLarge {
            n,
            max: MEET_IN_MIDDLE_MAX_ITEMS,
        });
    }
    let half = n / 2;
    let (left_items, right_items) = instance.items.split_at(half);
    let left = enumerate_half(left_items, instance.capacity);
    let mut right = enumerate_half(right_items, instance.capacity);
    right.sort_by(|a, b| a.weight.cmp(&b.weight).then(b.value.total_cmp(&a.value)));
    let mut front: Vec<Subset> = Vec::with_capacity(right.len());
    for s in right {
        if front.last().is_none_or(|last| s.value > last.value) {
            front.push(s);
        }
    }

    let mut best = (0.0, 0u64, 0u64);
    for l in &left {
        let room = instance.capacity - l.weight;
        let k = front.partition_point(|s| s.weight <= room);
        if k == 0 {
            continue;
        }
        let r = front[k - 1];
        let total = l.value + r.value;
        if total > best.0 {
            best = (total, l.mask, r.mask);
        }
    }
    let mut chosen = vec![false; n];
    for (i, c) in chosen.iter_mut().enumerate() {
        *c = if i < half {
            best.1 >> i & 1 == 1
        } else {
            best.2 >> (i - half) & 1 == 1
        };
    }
    Ok(KnapsackSolution::from_mask(instance, &chosen))
}

/// Bitstring objective for the GA with repair decoding.
///
/// Overweight selections are repaired by dropping chosen items in increasing
/// value/weight order until the load fits; the fitness is the total value of
/// the repaired selection.
#[derive(Debug, Clone)]
pub struct KnapsackObjective {
    instance: KnapsackInstance,
    /// Item indices by increasing ratio (drop order).
    drop_order: Vec<usize>,
}

impl KnapsackObjective {
    pub fn new(instance: KnapsackInstance) -> Self {
        let mut drop_order = instance.ratio_order();
        drop_order.reverse();
        Self {
            instance,
            drop_order,
        }
    }

    pub fn instance(&self) -> &KnapsackInstance {
        &self.instance
    }

    fn repair_bits(&self, bits: &mut [bool]) {
        let mut load: u64 = bits
            .iter()
            .zip(&self.instance.items)
            .filter(|(b, _)| **b)
            .map(|(_, it)| it.weight)
            .sum();
        for &i in &self.drop_order {
            if load <= self.instance.capacity {
                break;
            }
            if bits[i] {
                bits[i] = false;
                load -= self.instance.items[i].weight;
            }
        }
    }

    fn value_of(&self, bits: &[bool]) -> f64 {
        bits.iter()
            .zip(&self.instance.items)
            .filter(|(b, _)| **b)
            .map(|(_, it)| it.value)
            .sum()
    }
}

impl Objective for KnapsackObjective {
    fn evaluate(&self, value: &Genome) -> f64 {
        match value.as_bits() {
            Some(bits) if bits.len() == self.instance.len() => {
                let mut bits = bits.to_vec();
                self.repair_bits(&mut bits);
                self.value_of(&bits)
            }
            _ => f64::NAN,
        }
    }

    fn repair(&self, value: &mut Genome) {
        if let Genome::Bits(bits) = value {
            if bits.len() == self.instance.len() {
                self.repair_bits(bits);
            }
        }
    }
}

/// Decodes a bitstring into a feasible selection.
pub fn knapsack_ga_decode(
    bits: &[bool],
    instance: &KnapsackInstance,
) -> Result<KnapsackSolution, BenchmarkError> {
    if bits.len() != instance.len() {
        return Err(BenchmarkError::InvalidInstance(format!(
            "bitstring has length {}, instance has {} items",
            bits.len(),
            instance.len()
        )));
    }
    let objective = KnapsackObjective::new(instance.clone());
    let mut repaired = bits.to_vec();
    objective.repair_bits(&mut repaired);
    Ok(KnapsackSolution::from_mask(instance, &repaired))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed42_n12() -> KnapsackInstance {
        KnapsackInstance::random_uniform(12, 0.5, 42)
    }

    #[test]
    fn single_item_cases() {
        let too_heavy = KnapsackInstance::from_pairs(&[(10.0, 5)], 4).unwrap();
        let sol = knapsack_dp(&too_heavy).unwrap();
        assert_eq!((sol.value, sol.items.len()), (0.0, 0));
        let fits = KnapsackInstance::from_pairs(&[(10.0, 5)], 5).unwrap();
        let sol = knapsack_dp(&fits).unwrap();
        assert_eq!((sol.value, sol.items), (10.0, vec![0]));
        assert_eq!(knapsack_meet_in_middle(&fits).unwrap().value, 10.0);
    }

    #[test]
    fn seed42_oracles_agree() {
        let inst = seed42_n12();
        let dp = knapsack_dp(&inst).unwrap();
        let brute = knapsack_brute_force(&inst).unwrap();
        let mitm = knapsack_meet_in_middle(&inst).unwrap();
        assert_eq!(dp.value, brute.value);
        assert_eq!(dp.value, mitm.value);
        for sol in [&dp, &brute, &mitm] {
            assert!(inst.is_feasible(&sol.items));
            let v: f64 = sol.items.iter().map(|&i| inst.items[i].value).sum();
            assert_eq!(v, sol.value);
        }
        assert!(knapsack_greedy_dantzig(&inst).value <= dp.value);
    }

    #[test]
    fn brute_force_edge_cases() {
        let empty = KnapsackInstance::from_pairs(&[], 10).unwrap();
        assert_eq!(knapsack_brute_force(&empty).unwrap().value, 0.0);
        let heavy = KnapsackInstance::from_pairs(&[(3.0, 11), (4.0, 12)], 10).unwrap();
        assert_eq!(knapsack_brute_force(&heavy).unwrap().value, 0.0);
        let big = KnapsackInstance::random_uniform(26, 0.5, 1);
        assert!(matches!(knapsack_brute_force(&big), Err(BenchmarkError::TooLarge { .. })));
        let huge = KnapsackInstance::random_uniform(41, 0.5, 1);
        assert!(matches!(knapsack_meet_in_middle(&huge), Err(BenchmarkError::TooLarge { .. })));
    }

    #[test]
    fn greedy_examples() {
        let a = KnapsackInstance::from_pairs(&[(6.0, 3), (5.0, 5)], 5).unwrap();
        assert_eq!(knapsack_greedy_dantzig(&a).value, 6.0);
        assert_eq!(knapsack_dp(&a).unwrap().value, 6.0);
        let b = KnapsackInstance::from_pairs(&[(5.0, 4), (3.0, 3), (3.0, 3)], 6).unwrap();
        assert_eq!(knapsack_greedy_dantzig(&b).value, 5.0);
        assert_eq!(knapsack_dp(&b).unwrap().value, 6.0);
    }

    #[test]
    fn meet_in_middle_unconstrained() {
        let mut inst = KnapsackInstance::random_uniform(20, 0.5, 3);
        let total_w: u64 = inst.items.iter().map(|i| i.weight).sum();
        inst.capacity = 10 * total_w;
        let total_v: f64 = inst.items.iter().map(|i| i.value).sum();
        assert_eq!(knapsack_meet_in_middle(&inst).unwrap().value, total_v);
        let one = KnapsackInstance::from_pairs(&[(7.0, 2)], 3).unwrap();
        assert_eq!(knapsack_meet_in_middle(&one).unwrap().value, 7.0);
    }

    #[test]
    fn capacity_overflow() {
        let inst = KnapsackInstance::from_pairs(&[(1.0, 1); 10], 1_000_000).unwrap();
        assert!(matches!(
            knapsack_dp_capped(&inst, 1000),
            Err(BenchmarkError::CapacityOverflow { .. })
        ));
    }

    #[test]
    fn decode_repairs() {
        let inst = seed42_n12();
        let zeros = knapsack_ga_decode(&[false; 12], &inst).unwrap();
        assert_eq!(zeros.value, 0.0);
        let ones = knapsack_ga_decode(&[true; 12], &inst).unwrap();
        assert!(inst.is_feasible(&ones.items));
        assert!(ones.value <= knapsack_dp(&inst).unwrap().value);

        let mut roomy = inst.clone();
        roomy.capacity = 10_000;
        let all = knapsack_ga_decode(&[true; 12], &roomy).unwrap();
        assert_eq!(all.value, inst.items.iter().map(|i| i.value).sum::<f64>());
    }

    #[test]
    fn repair_drops_lowest_ratio_first() {
        // ratios: 1.0, 3.0, 0.5
        let inst = KnapsackInstance::from_pairs(&[(4.0, 4), (6.0, 2), (2.0, 4)], 6).unwrap();
        let sol = knapsack_ga_decode(&[true, true, true], &inst).unwrap();
        assert_eq!(sol.items, vec![0, 1]);
    }

    #[test]
    fn rejects_zero_weight() {
        assert!(KnapsackInstance::from_pairs(&[(1.0, 0)], 3).is_err());
    }
}
