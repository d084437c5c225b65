//! Pareto dominance, fast non-dominated sorting and crowding distance.

use std::cmp::Ordering;

use crate::objectives::ObjectiveVector;

/// True when `a` is no worse than `b` in both objectives and strictly better in one.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let no_worse = a.phi1 <= b.phi1 && a.phi2 <= b.phi2;
    let better = a.phi1 < b.phi1 || a.phi2 < b.phi2;
    no_worse && better
}

/// Partitions `points` into fronts of indices, best front first.
pub fn fast_nondominated_sort(points: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut current = Vec::new();

    for p in 0..n {
        for q in p + 1..n {
            if dominates(&points[p], &points[q]) {
                dominated_by[p].push(q);
                domination_count[q] += 1;
            } else if dominates(&points[q], &points[p]) {
                dominated_by[q].push(p);
                domination_count[p] += 1;
            }
        }
    }
    for p in 0..n {
        if domination_count[p] == 0 {
            current.push(p);
        }
    }

    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Rank (front number, 0-based) of every point.
pub fn ranks(points: &[ObjectiveVector]) -> Vec<usize> {
    let mut r = vec![0; points.len()];
    for (k, front) in fast_nondominated_sort(points).iter().enumerate() {
        for &i in front {
            r[i] = k;
        }
    }
    r
}

/// Crowding distance of each member of `front` (values are aligned with `front`).
///
/// Only the first copy of each distinct objective vector is crowded; repeat
/// copies get 0, so duplicates of an extreme point cannot all claim `+inf`.
/// Per objective the distinct members are stably sorted; the first and last
/// get `+inf`, interior members accumulate the normalized gap between their
/// neighbours. An objective with zero span contributes nothing.
pub fn crowding_distance(points: &[ObjectiveVector], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    let mut distinct: Vec<usize> = Vec::with_capacity(n);
    for k in 0..n {
        if !distinct.iter().any(|&d| points[front[d]] == points[front[k]]) {
            distinct.push(k);
        }
    }
    let m = distinct.len();
    if m <= 2 {
        for &k in &distinct {
            dist[k] = f64::INFINITY;
        }
        return dist;
    }
    for obj in 0..2 {
        let value = |k: usize| points[front[k]].as_array()[obj];
        let mut order = distinct.clone();
        order.sort_by(|&a, &b| value(a).partial_cmp(&value(b)).unwrap_or(Ordering::Equal));
        let lo = value(order[0]);
        let hi = value(order[m - 1]);
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..m - 1 {
            let k = order[w];
            if dist[k].is_finite() {
                dist[k] += (value(order[w + 1]) - value(order[w - 1])) / span;
            }
        }
    }
    dist
}
