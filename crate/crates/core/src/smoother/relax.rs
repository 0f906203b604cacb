//! Waypoint relaxation: taut polyline, maximal fillets, lateral descent.
//!
//! Waypoints live on fixed one-dimensional anchors: the start ray (the first
//! corner must stay on the fixed heading), one lateral rung per corridor
//! cell, and the exit edge. Corners where the polyline actually bends get
//! arc fillets; the tangent length available to a fillet is half the
//! straight run to the neighboring bends (a full run at the path ends), so
//! collinear intermediate waypoints do not starve the radius. A
//! configuration is scored lexicographically by (containment violation,
//! curvature excess over the bound, max |kappa|, median |kappa|);
//! coordinate descent over the anchor parameters accepts only strict
//! improvements, so the objective is monotone.

use super::{ArcPath, ArcSegment, Corridor, SmoothError, SmoothingConfig};
use crate::geometry::{hexagon_inside_margin, Point, Pose};
use crate::math::FloatExt;
use alloc::vec;
use alloc::vec::Vec;

/// Minimum leg length in units of r_c; shorter legs make directions and
/// fillet budgets unstable.
const MIN_LEG: f64 = 0.02;
/// Largest tolerated polyline corner (radians).
const MAX_CORNER: f64 = 2.5;
/// Corners bending less than this are treated as straight-through.
const PHI_EPS: f64 = 1e-9;
/// Waypoint clearance inside its own hexagon, in units of r_c.
const RUNG_CLIP: f64 = 1e-6;
/// Containment acceptance during relaxation, in units of r_c (half the
/// final tolerance, leaving headroom for the exact final check).
const INNER_TOL: f64 = 0.5e-6;
/// Smallest fillet radius in units of r_c.
const RHO_FLOOR: f64 = 1e-6;

struct Anchor {
    origin: Point,
    dir: Point,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    violation: f64,
    excess: f64,
    max_kappa: f64,
    median: f64,
}

/// An active (bending) corner with its fillet.
#[derive(Debug, Clone, Copy)]
struct Bend {
    /// Waypoint index of the apex.
    w: usize,
    phi: f64,
    tan_half: f64,
    /// Tangent length consumed on each side of the apex.
    t: f64,
    kappa: f64,
    arc_len: f64,
    violation: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Leg {
    dir: Point,
    len: f64,
    ok: bool,
}

/// Cache key for the containment-limited fillet of one corner.
#[derive(Debug, Clone, Copy, PartialEq)]
struct BendKey {
    apex: Point,
    in_dir: Point,
    out_dir: Point,
    rho_fit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct PieceKey {
    start: Point,
    dir: Point,
    from: f64,
    to: f64,
}

#[derive(Clone)]
struct Built {
    params: Vec<f64>,
    waypoints: Vec<Point>,
    legs: Vec<Leg>,
    bends: Vec<Bend>,
    bend_cache: Vec<Option<(BendKey, f64, f64)>>, // per waypoint: key, rho, violation
    piece_cache: Vec<Option<(PieceKey, f64)>>,    // per leg: key, violation
    piece_violation: Vec<f64>,
    score: Score,
    valid: bool,
}

pub(super) struct Model<'a> {
    corridor: &'a Corridor,
    config: &'a SmoothingConfig,
    start: Pose,
    rc: f64,
    anchors: Vec<Anchor>,
    /// Corridor cell index associated with each waypoint, for margin hints.
    wp_cell: Vec<usize>,
}

impl<'a> Model<'a> {
    fn new(
        corridor: &'a Corridor,
        start: Pose,
        config: &'a SmoothingConfig,
    ) -> Result<Self, SmoothError> {
        let rc = corridor.spec().cell_inner_radius;
        let centers = corridor.centers();
        let n_last = centers.len() - 1;

        let mut anchors = Vec::with_capacity(n_last + 2);
        let mut wp_cell = vec![0usize, 0];

        // Start ray: the first corner stays on the fixed heading.
        let ray_dir = start.direction();
        let t_hi = ray_reach(corridor, start.position, ray_dir, rc);
        if t_hi < 1e-3 * rc {
            return Err(SmoothError::Infeasible {
                kappa_ratio: 0.0,
                detail: "start heading leaves the corridor immediately".into(),
            });
        }
        anchors.push(Anchor {
            origin: start.position,
            dir: ray_dir,
            lo: (0.05 * rc).min(0.5 * t_hi),
            hi: t_hi,
        });

        // One lateral rung per cell after the first.
        for i in 1..=n_last {
            let ahead = if i < n_last {
                centers[i + 1] - centers[i - 1]
            } else {
                centers[n_last] - centers[n_last - 1]
            };
            let chain = ahead.normalized().expect("distinct cells");
            let rung = chain.perp();
            let cell = corridor.cells()[i];
            let spec = corridor.spec();
            let clip = RUNG_CLIP * rc;
            let extent = |d: Point| {
                let f = |lam: f64| hexagon_inside_margin(centers[i] + d.scale(lam), cell, spec);
                let mut ok = 0.0;
                let mut bad = 2.5 * rc;
                for _ in 0..40 {
                    let mid = 0.5 * (ok + bad);
                    if f(mid) >= clip {
                        ok = mid;
                    } else {
                        bad = mid;
                    }
                }
                ok
            };
            anchors.push(Anchor {
                origin: centers[i],
                dir: rung,
                lo: -extent(rung.scale(-1.0)),
                hi: extent(rung),
            });
            wp_cell.push(i);
        }

        // Exit point on the exit edge.
        let exit = corridor.exit_edge();
        let edge_len = exit.length();
        anchors.push(Anchor {
            origin: exit.a,
            dir: (exit.b - exit.a).normalized().expect("non-degenerate edge"),
            lo: 1e-4 * edge_len,
            hi: (1.0 - 1e-4) * edge_len,
        });
        wp_cell.push(n_last);

        Ok(Self {
            corridor,
            config,
            start,
            rc,
            anchors,
            wp_cell,
        })
    }

    fn waypoint_count(&self) -> usize {
        self.anchors.len() + 1
    }

    fn initial_params(&self) -> Vec<f64> {
        let mut params = Vec::with_capacity(self.anchors.len());
        for (i, a) in self.anchors.iter().enumerate() {
            let v = if i == 0 {
                self.rc
            } else if i + 1 == self.anchors.len() {
                0.5 * (a.lo + a.hi)
            } else {
                0.0
            };
            params.push(v.clamp(a.lo, a.hi));
        }
        params
    }

    /// String pulling: move each interior waypoint toward the straight line
    /// between its neighbors, clamped to its anchor range.
    fn taut(&self, params: &mut [f64]) {
        let m = self.waypoint_count() - 1; // index of the exit waypoint
        let max_sweeps = 40 * m + 100;
        let mut wps = self.waypoints(params);
        for _ in 0..max_sweeps {
            let mut moved = false;
            for w in 1..m {
                let a = &self.anchors[w - 1];
                let p1 = wps[w - 1];
                let p2 = wps[w + 1];
                let chord = p2 - p1;
                let denom = a.dir.cross(chord);
                if denom.abs_() < 1e-12 {
                    continue;
                }
                let rel = p1 - a.origin;
                let p_star = (rel.cross(chord) / denom).clamp(a.lo, a.hi);
                if (p_star - params[w - 1]).abs_() > 1e-12 * self.rc {
                    params[w - 1] = p_star;
                    wps[w] = a.origin + a.dir.scale(p_star);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    fn waypoints(&self, params: &[f64]) -> Vec<Point> {
        let mut wps = Vec::with_capacity(self.waypoint_count());
        wps.push(self.start.position);
        for (a, p) in self.anchors.iter().zip(params) {
            wps.push(a.origin + a.dir.scale(*p));
        }
        wps
    }

    /// Anchor parameter that puts waypoint `i + 1` on the straight line
    /// through its neighbors, when that intersection exists.
    fn snap_target(&self, built: &Built, i: usize) -> Option<f64> {
        let w = i + 1;
        if w + 1 >= built.waypoints.len() {
            return None;
        }
        let a = &self.anchors[i];
        let p1 = built.waypoints[w - 1];
        let p2 = built.waypoints[w + 1];
        let chord = p2 - p1;
        let denom = a.dir.cross(chord);
        if denom.abs_() < 1e-12 {
            return None;
        }
        Some((p1 - a.origin).cross(chord) / denom)
    }

    fn margin_hint(&self, p: Point, wp_lo: usize, wp_hi: usize) -> f64 {
        let cells = self.corridor.cells().len();
        let lo = self.wp_cell[wp_lo.min(self.wp_cell.len() - 1)].saturating_sub(2);
        let hi = (self.wp_cell[wp_hi.min(self.wp_cell.len() - 1)] + 2).min(cells - 1);
        self.corridor.inside_margin_hint(p, lo, hi)
    }

    fn deficit(&self, margin: f64) -> f64 {
        (-margin - INNER_TOL * self.rc).max(0.0)
    }

    /// Certified minimum corridor margin along a unit-speed curve span.
    ///
    /// The margin is 1-Lipschitz along the curve, so an interval whose
    /// endpoint margins both exceed its half-width plus the running minimum
    /// cannot contain a lower point; only grazing regions get refined. The
    /// result underestimates the true minimum by at most the resolution.
    fn span_min_margin(&self, pos: &dyn Fn(f64) -> Point, len: f64, w_lo: usize, w_hi: usize) -> f64 {
        let res = 1e-7 * self.rc;
        let m_at = |s: f64| self.margin_hint(pos(s), w_lo, w_hi);
        if len <= 0.0 {
            return m_at(0.0);
        }
        let n0 = ((len / (self.rc / 10.0)).ceil_() as usize).clamp(1, 4096);
        let mut result = f64::INFINITY;
        let mut stack: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(n0 + 16);
        let mut prev_s = 0.0;
        let mut prev_m = m_at(0.0);
        result = result.min(prev_m);
        for k in 1..=n0 {
            let s = len * (k as f64) / (n0 as f64);
            let m = m_at(s);
            result = result.min(m);
            stack.push((prev_s, s, prev_m, m));
            prev_s = s;
            prev_m = m;
        }
        while let Some((a, b, ma, mb)) = stack.pop() {
            let half = (b - a) / 2.0;
            let lb = ma.min(mb) - half;
            if lb >= result {
                continue;
            }
            if half < res {
                result = result.min(lb);
                continue;
            }
            let mid_s = a + half;
            let mid_m = m_at(mid_s);
            result = result.min(mid_m);
            stack.push((a, mid_s, ma, mid_m));
            stack.push((mid_s, b, mid_m, mb));
        }
        result
    }

    /// Containment deficit of a fillet arc.
    fn arc_deficit(&self, apex: Point, in_dir: Point, tan_half: f64, phi: f64, rho: f64, w: usize) -> f64 {
        let t = rho * tan_half;
        let kappa = if phi > 0.0 { 1.0 / rho } else { -1.0 / rho };
        let arc_len = rho * phi.abs_();
        let start = apex - in_dir.scale(t);
        let heading = in_dir.y.atan2_(in_dir.x);
        let seg = ArcSegment::arc(start, heading, kappa, arc_len);
        let reach = ((t / (2.0 * self.rc)).ceil_() as usize) + 2;
        let w_lo = w.saturating_sub(reach);
        let w_hi = w + reach;
        let pos = |s: f64| seg.pose_at(s).position;
        let min_margin = self.span_min_margin(&pos, arc_len, w_lo, w_hi);
        self.deficit(min_margin)
    }

    fn build(&self, params: &[f64], prev: Option<&Built>) -> Built {
        let m = self.waypoint_count() - 1; // number of legs
        let wps = self.waypoints(params);
        let mut valid = true;

        let legs: Vec<Leg> = (0..m)
            .map(|j| {
                let d = wps[j + 1] - wps[j];
                let len = d.norm();
                if len < MIN_LEG * self.rc {
                    valid = false;
                    Leg {
                        dir: Point::new(1.0, 0.0),
                        len,
                        ok: false,
                    }
                } else {
                    Leg {
                        dir: d.scale(1.0 / len),
                        len,
                        ok: true,
                    }
                }
            })
            .collect();

        // Corner angles; collect the bending corners.
        let mut bend_ws: Vec<(usize, f64)> = Vec::new();
        if valid {
            for w in 1..m {
                let li = &legs[w - 1];
                let lo = &legs[w];
                let phi = li.dir.cross(lo.dir).atan2_(li.dir.dot(lo.dir));
                if phi.abs_() > MAX_CORNER {
                    valid = false;
                    break;
                }
                if phi.abs_() >= PHI_EPS {
                    bend_ws.push((w, phi));
                }
            }
        }

        let mut built = Built {
            params: params.to_vec(),
            waypoints: wps,
            legs,
            bends: Vec::new(),
            bend_cache: vec![None; m + 1],
            piece_cache: vec![None; m],
            piece_violation: vec![0.0; m],
            score: Score {
                violation: f64::INFINITY,
                excess: f64::INFINITY,
                max_kappa: f64::INFINITY,
                median: f64::INFINITY,
            },
            valid,
        };
        if !valid {
            return built;
        }

        // Cumulative arc length of waypoints along the polyline.
        let mut cum = vec![0.0; m + 1];
        for j in 0..m {
            cum[j + 1] = cum[j] + built.legs[j].len;
        }

        // Tangent budgets over straight runs between bends; path ends grant
        // the full run, shared runs are split in half.
        let mut bends: Vec<Bend> = Vec::with_capacity(bend_ws.len());
        for (i, (w, phi)) in bend_ws.iter().enumerate() {
            let run_before = if i == 0 {
                cum[*w]
            } else {
                (cum[*w] - cum[bend_ws[i - 1].0]) / 2.0
            };
            let run_after = if i + 1 == bend_ws.len() {
                cum[m] - cum[*w]
            } else {
                (cum[bend_ws[i + 1].0] - cum[*w]) / 2.0
            };
            let tan_half = (phi.abs_() / 2.0).tan_();
            let budget = run_before.min(run_after).max(0.0);
            let rho_fit = (budget / tan_half).max(RHO_FLOOR * self.rc * 1e-3);
            let apex = built.waypoints[*w];
            let in_dir = built.legs[*w - 1].dir;
            let out_dir = built.legs[*w].dir;

            let key = BendKey {
                apex,
                in_dir,
                out_dir,
                rho_fit,
            };
            let cached = prev.and_then(|p| p.bend_cache[*w]).filter(|(k, _, _)| *k == key);
            let (rho, violation) = match cached {
                Some((_, rho, violation)) => (rho, violation),
                None => {
                    let rho_floor = RHO_FLOOR * self.rc;
                    let eval = |rho: f64| self.arc_deficit(apex, in_dir, tan_half, *phi, rho, *w);
                    let rho = if rho_fit <= rho_floor {
                        rho_fit
                    } else if eval(rho_fit) == 0.0 {
                        rho_fit
                    } else if eval(rho_floor) > 0.0 {
                        rho_floor
                    } else {
                        // Largest radius whose arc stays inside; small radii
                        // hug the apex, which sits inside its own hexagon.
                        let mut ok = rho_floor;
                        let mut bad = rho_fit;
                        for _ in 0..22 {
                            let mid = 0.5 * (ok + bad);
                            if eval(mid) == 0.0 {
                                ok = mid;
                            } else {
                                bad = mid;
                            }
                        }
                        ok
                    };
                    (rho, eval(rho))
                }
            };
            built.bend_cache[*w] = Some((key, rho, violation));
            let kappa = if *phi > 0.0 { 1.0 / rho } else { -1.0 / rho };
            bends.push(Bend {
                w: *w,
                phi: *phi,
                tan_half,
                t: rho * tan_half,
                kappa,
                arc_len: rho * phi.abs_(),
                violation,
            });
        }

        // Trim consumed tangent spans off the legs, walking outward from
        // each apex (a tangent may span several collinear legs).
        let mut trim_start = vec![0.0f64; m];
        let mut trim_end = vec![0.0f64; m];
        for b in &bends {
            let mut rem = b.t;
            let mut j = b.w as isize - 1;
            while rem > 0.0 && j >= 0 {
                let take = rem.min(built.legs[j as usize].len);
                trim_end[j as usize] = trim_end[j as usize].max(take);
                rem -= take;
                j -= 1;
            }
            let mut rem = b.t;
            let mut j = b.w;
            while rem > 0.0 && j < m {
                let take = rem.min(built.legs[j].len);
                trim_start[j] = trim_start[j].max(take);
                rem -= take;
                j += 1;
            }
        }

        // Straight-piece containment per leg, cached on exact geometry.
        for j in 0..m {
            let leg = &built.legs[j];
            let from = trim_start[j];
            let to = leg.len - trim_end[j];
            if to - from <= 0.0 {
                built.piece_violation[j] = 0.0;
                built.piece_cache[j] = None;
                continue;
            }
            let key = PieceKey {
                start: built.waypoints[j],
                dir: leg.dir,
                from,
                to,
            };
            let cached = prev.and_then(|p| p.piece_cache[j]).filter(|(k, _)| *k == key);
            let violation = match cached {
                Some((_, v)) => v,
                None => {
                    let piece = to - from;
                    let base = built.waypoints[j] + leg.dir.scale(from);
                    let dir = leg.dir;
                    let pos = |s: f64| base + dir.scale(s);
                    let min_margin = self.span_min_margin(&pos, piece, j, j + 1);
                    self.deficit(min_margin)
                }
            };
            built.piece_cache[j] = Some((key, violation));
            built.piece_violation[j] = violation;
        }

        // Score.
        let mut violation = 0.0;
        let mut max_kappa = 0.0f64;
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(m + bends.len());
        for j in 0..m {
            violation += built.piece_violation[j];
            let piece = (built.legs[j].len - trim_start[j] - trim_end[j]).max(0.0);
            if piece > 0.0 {
                pieces.push((piece, 0.0));
            }
        }
        for b in &bends {
            violation += b.violation;
            let k = b.kappa.abs_();
            if k > max_kappa {
                max_kappa = k;
            }
            if b.arc_len > 0.0 {
                pieces.push((b.arc_len, k));
            }
        }
        built.bends = bends;
        built.score = Score {
            violation,
            excess: (max_kappa - self.config.kappa_max).max(0.0),
            max_kappa,
            median: run_length_median(&mut pieces),
        };
        built
    }

    /// Lexicographic improvement test with a meaningful-decrease threshold
    /// and a tight no-worsening guard per component: a candidate improves
    /// when it lowers containment violation, else curvature excess, else
    /// max |kappa|, else the median among max-equal configurations.
    fn improved(&self, new: &Score, old: &Score) -> bool {
        let kmax = self.config.kappa_max;
        let tol = self.config.convergence_tol * kmax;
        let comps = [
            (new.violation, old.violation, 1e-12 * self.rc, 1e-12 * self.rc),
            (new.excess, old.excess, 1e-12 * kmax, 1e-12 * kmax),
            (new.max_kappa, old.max_kappa, tol, 1e-12 * kmax),
            (new.median, old.median, tol, 1e-12 * kmax),
        ];
        for (a, b, improve_eps, worsen_eps) in comps {
            if a < b - improve_eps {
                return true;
            }
            if a > b + worsen_eps {
                return false;
            }
        }
        false
    }

    fn assemble(&self, b: &Built) -> ArcPath {
        let m = self.waypoint_count() - 1;
        let mut cum = vec![0.0; m + 1];
        for j in 0..m {
            cum[j + 1] = cum[j] + b.legs[j].len;
        }
        let mut segments = Vec::new();
        let mut pose = self.start;
        let eps = 1e-12 * self.rc;
        let mut travelled = 0.0;
        for bend in &b.bends {
            let line_len = (cum[bend.w] - bend.t - travelled).max(0.0);
            if line_len > eps {
                let seg = ArcSegment::line(pose.position, pose.heading, line_len);
                pose = seg.end_pose();
                segments.push(seg);
            }
            let seg = ArcSegment::arc(pose.position, pose.heading, bend.kappa, bend.arc_len);
            pose = seg.end_pose();
            segments.push(seg);
            travelled = cum[bend.w] + bend.t;
        }
        let tail = (cum[m] - travelled).max(0.0);
        if tail > eps || segments.is_empty() {
            segments.push(ArcSegment::line(pose.position, pose.heading, tail));
        }
        ArcPath { segments }
    }
}

/// How far the start ray stays inside the corridor.
fn ray_reach(corridor: &Corridor, origin: Point, dir: Point, rc: f64) -> f64 {
    let clip = RUNG_CLIP * rc;
    let cap = (corridor.cells().len() as f64 + 2.0) * 2.0 * rc;
    let coarse = rc / 20.0;
    let margin_at = |s: f64| corridor.inside_margin(origin + dir.scale(s));
    let mut last_ok = 0.0;
    let mut s = 0.0;
    let mut first_bad = None;
    while s <= cap {
        let m = margin_at(s);
        let near_start_slack = if s <= 0.25 * rc { -1e-7 * rc } else { clip };
        if m >= near_start_slack {
            last_ok = s;
        } else {
            first_bad = Some(s);
            break;
        }
        s += coarse;
    }
    match first_bad {
        None => last_ok,
        Some(bad) => {
            let mut ok = last_ok;
            let mut bad = bad;
            for _ in 0..20 {
                let mid = 0.5 * (ok + bad);
                if margin_at(mid) >= clip {
                    ok = mid;
                } else {
                    bad = mid;
                }
            }
            ok
        }
    }
}

/// Interpolated median of |kappa| weighted by piece length.
fn run_length_median(pieces: &mut Vec<(f64, f64)>) -> f64 {
    let total: f64 = pieces.iter().map(|(len, _)| len).sum();
    if total <= 0.0 {
        return 0.0;
    }
    pieces.sort_by(|a, b| a.1.total_cmp(&b.1));
    let half = total / 2.0;
    let mut cum = 0.0;
    for (i, (len, k)) in pieces.iter().enumerate() {
        cum += len;
        if cum > half + 1e-12 * total {
            return *k;
        }
        if (cum - half).abs_() <= 1e-12 * total {
            let next = pieces.get(i + 1).map_or(*k, |(_, nk)| *nk);
            return (*k + next) / 2.0;
        }
    }
    pieces.last().map_or(0.0, |(_, k)| *k)
}

impl<'a> Model<'a> {
    /// Coordinate descent over the anchor parameters with step annealing.
    fn descend(&self, mut current: Built, sweep_budget: usize) -> Built {
        let step_fractions = [
            0.6, 0.3, 0.15, 0.06, 0.025, 0.01, 0.004, 0.0015, 0.0006, 0.00025,
        ];
        let mut sweeps = 0usize;
        'steps: for frac in step_fractions {
            let step = frac * self.rc;
            loop {
                sweeps += 1;
                if sweeps > sweep_budget {
                    break 'steps;
                }
                let mut any = false;
                for i in 0..current.params.len() {
                    let a = &self.anchors[i];
                    let cur = current.params[i];
                    let mut best: Option<Built> = None;
                    let mut tied = false;
                    // Besides stepping, a waypoint may snap onto the line
                    // through its neighbors, which deactivates its corner in
                    // one move; stepping alone cannot do that.
                    let snap = self.snap_target(&current, i);
                    for cand_val in [Some(cur + step), Some(cur - step), snap] {
                        let v = match cand_val {
                            Some(v) => v.clamp(a.lo, a.hi),
                            None => continue,
                        };
                        if (v - cur).abs_() < 0.05 * step {
                            continue;
                        }
                        let mut p2 = current.params.clone();
                        p2[i] = v;
                        let cand = self.build(&p2, Some(&current));
                        if !cand.valid {
                            continue;
                        }
                        // From an invalid configuration any valid one counts
                        // as an improvement.
                        if current.valid && !self.improved(&cand.score, &current.score) {
                            continue;
                        }
                        match &best {
                            None => best = Some(cand),
                            Some(b) => {
                                let ord = lex_cmp(&cand.score, &b.score);
                                if ord == core::cmp::Ordering::Less {
                                    best = Some(cand);
                                    tied = false;
                                } else if ord == core::cmp::Ordering::Equal {
                                    // A perfect two-sided tie has no
                                    // preferred direction; leave the
                                    // waypoint in place.
                                    tied = true;
                                }
                            }
                        }
                    }
                    if tied {
                        continue;
                    }
                    if let Some(b) = best {
                        debug_assert!(
                            !current.valid
                                || b.score.violation
                                    <= current.score.violation + 1e-12 * self.rc,
                            "relaxation violation must not regress"
                        );
                        debug_assert!(
                            !current.valid
                                || b.score.violation
                                    < current.score.violation - 1e-12 * self.rc
                                || b.score.excess
                                    <= current.score.excess
                                        + 1e-12 * self.config.kappa_max,
                            "relaxation curvature excess must not regress"
                        );
                        current = b;
                        any = true;
                    }
                }
                if !any {
                    break;
                }
            }
        }
        current
    }
}

/// Full pipeline: initialization (the better of a taut polyline and the
/// cell-center spine), maximal fillets, then lateral relaxation minimizing
/// first max |kappa| and then the median among max-equal configurations.
pub(super) fn run(
    corridor: &Corridor,
    start: Pose,
    config: &SmoothingConfig,
) -> Result<ArcPath, SmoothError> {
    let model = Model::new(corridor, start, config)?;
    let budget = config.max_iterations / 2;

    // A taut polyline minimizes length but concentrates turning at the
    // inner corners; the center spine spreads turning across the corridor.
    // Relax both and keep the better.
    let mut taut_params = model.initial_params();
    model.taut(&mut taut_params);
    let taut = model.build(&taut_params, None);
    let centers = model.build(&model.initial_params(), None);

    let mut current: Option<Built> = None;
    for init in [taut, centers] {
        if !init.valid && current.as_ref().is_some_and(|c| c.valid) {
            continue;
        }
        let relaxed = model.descend(init, budget);
        current = match current {
            None => Some(relaxed),
            Some(best) => {
                let keep_new = (!best.valid && relaxed.valid)
                    || (best.valid == relaxed.valid
                        && lex_cmp(&relaxed.score, &best.score)
                            == core::cmp::Ordering::Less);
                Some(if keep_new { relaxed } else { best })
            }
        };
    }
    let current = current.expect("at least one initialization");

    Ok(model.assemble(&current))
}

fn lex_cmp(a: &Score, b: &Score) -> core::cmp::Ordering {
    a.violation
        .total_cmp(&b.violation)
        .then_with(|| a.excess.total_cmp(&b.excess))
        .then_with(|| a.max_kappa.total_cmp(&b.max_kappa))
        .then_with(|| a.median.total_cmp(&b.median))
}
