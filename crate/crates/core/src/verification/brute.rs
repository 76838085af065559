use crate::scalar::Scalar;
use crate::space::VectorFamily;

/// Component id (smallest member id) of every member, from the full pairwise
/// intersection matrix and label propagation to a fixpoint. Quadratic in the
/// family size and independent of the incidence index.
pub fn brute_force_components<S: Scalar>(family: &VectorFamily<S>) -> Vec<u64> {
    let supports: Vec<Vec<u64>> = family
        .vectors()
        .map(|v| v.support().map(|l| l.0).collect())
        .collect();
    let n = supports.len();
    let mut adjacent = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if intersects(&supports[i], &supports[j]) {
                adjacent[i].push(j);
                adjacent[j].push(i);
            }
        }
    }
    let mut label: Vec<u64> = family.ids().collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            for &j in &adjacent[i] {
                if label[j] < label[i] {
                    label[i] = label[j];
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}
