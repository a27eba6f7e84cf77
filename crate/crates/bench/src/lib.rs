//! Fixed workloads shared by the benchmarks.

use planes_core::lattice::{plane_counts_up_to, plucker_vectors};
use planes_core::mds::verify_local_identity;
use planes_core::qform::class_group;
use planes_core::repnum::r24_formula;

pub fn enumerate_one(n: u64) -> usize {
    plucker_vectors(n).len()
}

pub fn sweep(nmax: u64) -> u64 {
    plane_counts_up_to(nmax).iter().sum()
}

pub fn formula_range(dmax: u64) -> u64 {
    (1..=dmax).map(|d| r24_formula(d).unwrap()).sum()
}

pub fn class_group_order(d: i64) -> usize {
    class_group(d).unwrap().order()
}

pub fn local_identity() -> bool {
    verify_local_identity().all_equal
}
