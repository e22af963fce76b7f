#![allow(dead_code)]

use std::sync::Arc;

use rankgeo::{Elem, FieldTower, Mat, QSystem, RankMetricCode};

pub fn tower(p: u32, e: u32, m: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, e, m).unwrap())
}

/// Powers of the field generator; `pw(t, -1)` is zero.
pub fn pw(t: &FieldTower, i: i64) -> Elem {
    if i < 0 {
        Elem::ZERO
    } else {
        t.pow(t.generator(), i).unwrap()
    }
}

/// Matrix from exponents of the generator, with -1 for zero.
pub fn mat(t: &FieldTower, rows: &[&[i64]]) -> Mat {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&i| pw(t, i)).collect()).collect()).unwrap()
}

/// The [4,2]_{8/2} code with G = [[1,0,α,0],[0,1,0,α²]].
pub fn code_4_2() -> RankMetricCode {
    let t = tower(2, 1, 3);
    let g = mat(&t, &[&[0, -1, 1, -1], &[-1, 0, -1, 2]]);
    RankMetricCode::new(t, g).unwrap()
}

/// The [5,2]_{8/2} code with G = [[1,0,α,α²,1],[0,1,1,0,α]].
pub fn code_5_2() -> RankMetricCode {
    let t = tower(2, 1, 3);
    let g = mat(&t, &[&[0, -1, 1, 2, 0], &[-1, 0, 0, -1, 1]]);
    RankMetricCode::new(t, g).unwrap()
}

pub fn system(t: &Arc<FieldTower>, rows: &[&[i64]]) -> QSystem {
    QSystem::new(t.clone(), mat(t, rows)).unwrap()
}
