//! First-exit walks and the face-circuits they trace.

use std::f64::consts::{PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::frame::{DirectedLink, Frame};
use crate::geometry::{norm_angle_pos, ANGLE_TOL};

/// Turning sums farther than this from ±2π are treated as a defect.
pub const TURNING_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("walk from directed link {0} did not close")]
    NonClosingWalk(usize),
    #[error("circuit starting at directed link {start} turns by {sum} rad")]
    TurningSumAnomaly { start: usize, sum: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Anticlockwise,
    Clockwise,
}

/// One closed first-exit walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceCircuit {
    pub steps: Vec<DirectedLink>,
    /// Turn at the head of each step; the last entry is the closing turn.
    pub turning_angles: Vec<f64>,
    pub turning_sum: f64,
    pub link_count: usize,
    pub node_count: usize,
    pub corner_count: usize,
    pub side_count: usize,
    pub orientation: Orientation,
}

impl FaceCircuit {
    /// Smallest directed-link id, which is also the first step.
    pub fn start_id(&self) -> usize {
        self.steps[0].id()
    }

    /// +1 for anticlockwise circuits, −1 for clockwise ones.
    pub fn winding_sign(&self) -> i64 {
        match self.orientation {
            Orientation::Anticlockwise => 1,
            Orientation::Clockwise => -1,
        }
    }

    /// Head node of each step.
    pub fn visits<'a, F: Frame + ?Sized>(&'a self, g: &'a F) -> impl Iterator<Item = usize> + 'a {
        self.steps.iter().map(move |&d| g.head(d))
    }

    pub fn signed_area<F: Frame + ?Sized>(&self, g: &F) -> f64 {
        self.steps.iter().map(|&d| g.area_term(d)).sum()
    }

    pub fn length<F: Frame + ?Sized>(&self, g: &F) -> f64 {
        self.steps.iter().map(|&d| g.link_length(d.link)).sum()
    }
}

/// Chooses the exit at the head of `entering` that turns furthest anticlockwise.
///
/// Returns the exit and the turn ζ ∈ [−π, π); reversing scores exactly −π.
pub fn first_exit_step<F: Frame + ?Sized>(g: &F, entering: DirectedLink) -> (DirectedLink, f64) {
    let head = g.head(entering);
    let inc = g.incidence(head);
    let back = entering.reversed().id();
    let k = inc.len();
    let pos = inc.iter().position(|i| i.dir == back).expect("entering link is incident to its head");
    let exit = inc[(pos + k - 1) % k];
    if exit.dir == back {
        return (entering.reversed(), -PI);
    }
    let gap = norm_angle_pos(inc[pos].angle - exit.angle);
    let gap = if gap == 0.0 { TAU } else { gap };
    let mut zeta = PI - gap;
    if zeta.abs() < ANGLE_TOL {
        zeta = 0.0;
    }
    (DirectedLink::from_id(exit.dir), zeta)
}

/// Partitions all directed links into face-circuits, ordered by starting id.
pub fn extract_circuits<F: Frame + ?Sized>(g: &F) -> Result<Vec<FaceCircuit>, WalkError> {
    let total = 2 * g.link_count();
    let mut used = vec![false; total];
    let mut out = Vec::new();
    for start in 0..total {
        if used[start] {
            continue;
        }
        let mut steps = Vec::new();
        let mut turns = Vec::new();
        let mut cur = DirectedLink::from_id(start);
        loop {
            if used[cur.id()] || steps.len() > total {
                return Err(WalkError::NonClosingWalk(start));
            }
            used[cur.id()] = true;
            steps.push(cur);
            let (next, zeta) = first_exit_step(g, cur);
            turns.push(zeta);
            if next.id() == start {
                break;
            }
            cur = next;
        }
        out.push(make_circuit(g, steps, turns)?);
    }
    Ok(out)
}

fn make_circuit<F: Frame + ?Sized>(
    g: &F,
    steps: Vec<DirectedLink>,
    turns: Vec<f64>,
) -> Result<FaceCircuit, WalkError> {
    let sum: f64 = turns.iter().sum::<f64>() + steps.iter().map(|&d| g.internal_turn(d)).sum::<f64>();
    if (sum.abs() - TAU).abs() > TURNING_TOL {
        return Err(WalkError::TurningSumAnomaly { start: steps[0].id(), sum });
    }
    let link_count = steps.iter().filter(|d| g.is_counted_link(d.link)).count();
    let mut node_count = 0;
    let mut corner_count = 0;
    for (d, &z) in steps.iter().zip(&turns) {
        if g.is_counted_node(g.head(*d)) {
            node_count += 1;
            if z != 0.0 {
                corner_count += 1;
            }
        }
    }
    Ok(FaceCircuit {
        steps,
        turning_angles: turns,
        turning_sum: sum,
        link_count,
        node_count,
        corner_count,
        side_count: corner_count,
        orientation: if sum > 0.0 { Orientation::Anticlockwise } else { Orientation::Clockwise },
    })
}
