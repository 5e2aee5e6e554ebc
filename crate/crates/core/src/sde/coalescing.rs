use rand_distr::{Distribution, StandardNormal};

use super::{sample_noise, solve_lr};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MotionKind {
    Left,
    Right,
}

/// Paths of a system of left and right motions on the grid
/// `t_k = k * step`. Path `i` is left if `kinds[i]` says so; the first
/// `lefts.len()` paths are the lefts in input order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalescingSystem {
    step: f64,
    pub kinds: Vec<MotionKind>,
    pub paths: Vec<Vec<f64>>,
    /// Number of coalescence events.
    pub coalescences: usize,
    /// Number of times a right motion crossed a left motion.
    pub crossings: usize,
}

impl CoalescingSystem {
    pub fn step(&self) -> f64 {
        self.step
    }
}

#[derive(Clone, Debug)]
struct Group {
    kind: MotionKind,
    members: Vec<usize>,
    pos: f64,
}

/// Motions of the same kind coalesce when they meet. A left followed
/// immediately by a right evolves as a pair under the left-right SDE;
/// everything else moves as an independent drifted Brownian motion. After
/// every coalescence or crossing the grouping is redone and evolution
/// restarts with fresh noise.
// claim: coalescing-system
pub fn solve_coalescing_system(
    lefts: &[f64],
    rights: &[f64],
    horizon: f64,
    step: f64,
    seed: u64,
) -> Result<CoalescingSystem> {
    if lefts.iter().chain(rights).any(|x| !x.is_finite()) {
        return Err(Error::param("start", "positions must be finite"));
    }
    let probe = sample_noise(step, horizon, 0)?;
    let n = probe.steps();
    let kinds: Vec<MotionKind> = lefts
        .iter()
        .map(|_| MotionKind::Left)
        .chain(rights.iter().map(|_| MotionKind::Right))
        .collect();
    let mut groups: Vec<Group> = lefts
        .iter()
        .chain(rights)
        .enumerate()
        .map(|(i, &p)| Group {
            kind: kinds[i],
            members: vec![i],
            pos: p,
        })
        .collect();
    let mut sys = CoalescingSystem {
        step,
        kinds: kinds.clone(),
        paths: vec![Vec::with_capacity(n + 1); kinds.len()],
        coalescences: 0,
        crossings: 0,
    };
    merge_equal(&mut groups, &mut sys.coalescences);
    record(&groups, &mut sys.paths);
    let mut j = 0usize;
    let mut segment = 0u64;
    while j < n {
        sort_groups(&mut groups);
        let m = n - j;
        // evolve every partition element over the remaining steps
        let mut traj: Vec<Vec<f64>> = vec![Vec::new(); groups.len()];
        let mut i = 0;
        let mut elem = 0u64;
        while i < groups.len() {
            let s = rng::derive_seed(seed, (segment << 20) | elem);
            elem += 1;
            let paired = groups[i].kind == MotionKind::Left
                && i + 1 < groups.len()
                && groups[i + 1].kind == MotionKind::Right;
            if paired {
                let nz = sample_noise(step, m as f64 * step, s)?;
                let sol = solve_lr(&nz, groups[i].pos, groups[i + 1].pos)?;
                traj[i] = sol.l;
                traj[i + 1] = sol.r;
                i += 2;
            } else {
                let mut r = rng::stream_rng(s, 1);
                let drift = if groups[i].kind == MotionKind::Left {
                    -step
                } else {
                    step
                };
                let sd = step.sqrt();
                let mut x = groups[i].pos;
                let mut v = Vec::with_capacity(m + 1);
                v.push(x);
                for _ in 0..m {
                    let z: f64 = StandardNormal.sample(&mut r);
                    x += sd * z + drift;
                    v.push(x);
                }
                traj[i] = v;
                i += 1;
            }
        }
        segment += 1;
        let mut stop = m;
        for s in 1..=m {
            for (g, tr) in groups.iter_mut().zip(&traj) {
                g.pos = tr[s];
            }
            let event = groups.windows(2).any(|w| {
                w[1].pos < w[0].pos
                    || (w[1].pos == w[0].pos && w[0].kind == w[1].kind)
                    || (w[1].pos == w[0].pos
                        && w[0].kind == MotionKind::Right
                        && w[1].kind == MotionKind::Left)
            });
            record(&groups, &mut sys.paths);
            if event {
                stop = s;
                break;
            }
        }
        j += stop;
        if j < n {
            resolve(&mut groups, &mut sys);
        }
    }
    Ok(sys)
}

fn sort_groups(groups: &mut [Group]) {
    groups.sort_by(|a, b| {
        a.pos
            .partial_cmp(&b.pos)
            .unwrap()
            .then_with(|| (a.kind == MotionKind::Right).cmp(&(b.kind == MotionKind::Right)))
    });
}

fn record(groups: &[Group], paths: &mut [Vec<f64>]) {
    for g in groups {
        for &m in &g.members {
            paths[m].push(g.pos);
        }
    }
}

/// Handle the order changes of the last step. `groups` is in its pre-step
/// order with post-step positions.
fn resolve(groups: &mut Vec<Group>, sys: &mut CoalescingSystem) {
    // same-kind motions that met or passed each other coalesce
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                if groups[a].kind == groups[b].kind && groups[b].pos <= groups[a].pos {
                    let gb = groups.remove(b);
                    let ga = &mut groups[a];
                    ga.pos = 0.5 * (ga.pos + gb.pos);
                    ga.members.extend(gb.members);
                    sys.coalescences += 1;
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    for a in 0..groups.len() {
        for b in (a + 1)..groups.len() {
            if groups[a].kind == MotionKind::Right
                && groups[b].kind == MotionKind::Left
                && groups[a].pos >= groups[b].pos
            {
                sys.crossings += 1;
            }
        }
    }
    sort_groups(groups);
}

fn merge_equal(groups: &mut Vec<Group>, count: &mut usize) {
    sort_groups(groups);
    let mut i = 0;
    while i + 1 < groups.len() {
        if groups[i].kind == groups[i + 1].kind && groups[i].pos == groups[i + 1].pos {
            let g = groups.remove(i + 1);
            groups[i].members.extend(g.members);
            *count += 1;
        } else {
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lefts_coalesce_and_stay_together() {
        let sys = solve_coalescing_system(&[0.0, 0.05], &[], 4.0, 1e-3, 3).unwrap();
        assert_eq!(sys.coalescences, 1);
        let (a, b) = (&sys.paths[0], &sys.paths[1]);
        let k = a.iter().zip(b).position(|(x, y)| x == y).unwrap();
        assert!(a[k..] == b[k..]);
    }

    #[test]
    fn pair_stays_ordered() {
        let sys = solve_coalescing_system(&[0.0], &[0.0], 1.0, 1e-3, 1).unwrap();
        assert!(sys.paths[0].iter().zip(&sys.paths[1]).all(|(l, r)| l <= r));
        assert_eq!(sys.paths[0].len(), 1001);
    }

    #[test]
    fn crossed_pair_crosses_once() {
        let sys = solve_coalescing_system(&[0.3], &[0.0], 3.0, 1e-3, 2).unwrap();
        assert_eq!(sys.crossings, 1);
        let last = sys.paths[0].len() - 1;
        assert!(sys.paths[0][last] <= sys.paths[1][last]);
    }

    #[test]
    fn equal_starts_are_one_motion() {
        let sys = solve_coalescing_system(&[0.0, 0.0], &[1.0], 0.5, 1e-2, 0).unwrap();
        assert_eq!(sys.coalescences, 1);
        assert_eq!(sys.paths[0], sys.paths[1]);
    }
}
