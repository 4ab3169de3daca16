//! System geometry: BS, relay, waveguide and user positions, plus the
//! pinching-antenna placement rule.
//!
//! Canonical layout (all lengths in meters): the service area is the square
//! `[0, side] x [0, side]` on the ground plane z = 0; the waveguide runs along
//! +x at `y = side/2`, `z = height`, spanning the area; the relay receive
//! antenna sits `feed_offset` behind the waveguide feed on the same axis; the
//! BS sits a further `bs_relay_distance` behind the relay receive antenna.

use rand::Rng;

use crate::{Result, SimError};

/// Tolerance for "point lies on the waveguide segment" checks, meters.
pub const ON_SEGMENT_TOL_M: f64 = 1e-9;

/// A point in 3D space, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Point3> {
        for (value, what) in [(x, "x coordinate"), (y, "y coordinate"), (z, "z coordinate")] {
            if !value.is_finite() {
                return Err(SimError::NonFinite { what, value });
            }
        }
        Ok(Point3 { x, y, z })
    }

    pub fn translate(self, dx: f64, dy: f64, dz: f64) -> Point3 {
        Point3 {
            x: self.x + dx,
            y: self.y + dy,
            z: self.z + dz,
        }
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Point3, b: Point3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// A straight dielectric waveguide segment along which one PA may be placed.
#[derive(Debug, Clone, Copy)]
pub struct Waveguide {
    feed_point: Point3,
    axis: Point3,
    span_m: f64,
}

impl Waveguide {
    /// `axis` need not be pre-normalized; a zero vector is rejected.
    pub fn new(feed_point: Point3, axis: (f64, f64, f64), span_m: f64) -> Result<Waveguide> {
        if !span_m.is_finite() || span_m <= 0.0 {
            return Err(SimError::OutOfRange {
                what: "waveguide span",
                detail: format!("must be finite and > 0 m, got {span_m}"),
            });
        }
        let norm = (axis.0 * axis.0 + axis.1 * axis.1 + axis.2 * axis.2).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(SimError::Geometry(
                "waveguide axis must be a nonzero finite vector".into(),
            ));
        }
        // Every point of the segment shares the mounting height.
        if axis.2 != 0.0 {
            return Err(SimError::Geometry(
                "waveguide axis must be horizontal (zero z component)".into(),
            ));
        }
        Ok(Waveguide {
            feed_point,
            axis: Point3 {
                x: axis.0 / norm,
                y: axis.1 / norm,
                z: axis.2 / norm,
            },
            span_m,
        })
    }

    pub fn feed_point(&self) -> Point3 {
        self.feed_point
    }

    /// Unit vector along the segment, from the feed towards the far end.
    pub fn axis(&self) -> (f64, f64, f64) {
        (self.axis.x, self.axis.y, self.axis.z)
    }

    pub fn span_m(&self) -> f64 {
        self.span_m
    }

    /// Mounting height of the segment (z of the feed point).
    pub fn height_m(&self) -> f64 {
        self.feed_point.z
    }

    /// Point at arc length `t` from the feed (unclamped).
    fn point_at(&self, t: f64) -> Point3 {
        Point3 {
            x: self.feed_point.x + t * self.axis.x,
            y: self.feed_point.y + t * self.axis.y,
            z: self.feed_point.z + t * self.axis.z,
        }
    }
}

/// Square service area on the ground plane in which users are dropped.
#[derive(Debug, Clone, Copy)]
pub struct ServiceArea {
    origin: Point3,
    side_x_m: f64,
    side_y_m: f64,
}

impl ServiceArea {
    pub fn new(origin: Point3, side_x_m: f64, side_y_m: f64) -> Result<ServiceArea> {
        for (side, what) in [(side_x_m, "area side_x"), (side_y_m, "area side_y")] {
            if !side.is_finite() || side < 0.0 {
                return Err(SimError::OutOfRange {
                    what,
                    detail: format!("must be finite and >= 0 m, got {side}"),
                });
            }
        }
        Ok(ServiceArea {
            origin,
            side_x_m,
            side_y_m,
        })
    }

    pub fn origin(&self) -> Point3 {
        self.origin
    }

    pub fn side_x_m(&self) -> f64 {
        self.side_x_m
    }

    pub fn side_y_m(&self) -> f64 {
        self.side_y_m
    }

    pub fn contains_xy(&self, x: f64, y: f64, tol: f64) -> bool {
        x >= self.origin.x - tol
            && x <= self.origin.x + self.side_x_m + tol
            && y >= self.origin.y - tol
            && y <= self.origin.y + self.side_y_m + tol
    }
}

/// Full deterministic layout of one simulated deployment.
#[derive(Debug, Clone, Copy)]
pub struct SystemGeometry {
    pub bs_position: Point3,
    pub relay_rx_position: Point3,
    pub waveguide: Waveguide,
    pub service_area: ServiceArea,
    pub bs_relay_distance_m: f64,
}

impl SystemGeometry {
    pub fn new(
        bs_position: Point3,
        relay_rx_position: Point3,
        waveguide: Waveguide,
        service_area: ServiceArea,
        bs_relay_distance_m: f64,
    ) -> Result<SystemGeometry> {
        let d = distance(bs_position, relay_rx_position);
        if (d - bs_relay_distance_m).abs() > 1e-9 {
            return Err(SimError::Geometry(format!(
                "|BS - relay_rx| = {d} m does not match bs_relay_distance = {bs_relay_distance_m} m"
            )));
        }
        // Both segment ends must project into the service area footprint.
        for t in [0.0, waveguide.span_m()] {
            let p = waveguide.point_at(t);
            if !service_area.contains_xy(p.x, p.y, 1e-9) {
                return Err(SimError::Geometry(format!(
                    "waveguide point ({}, {}, {}) is not above the service area",
                    p.x, p.y, p.z
                )));
            }
        }
        if waveguide.height_m() <= 0.0 {
            return Err(SimError::Geometry(format!(
                "waveguide height must be positive, got {}",
                waveguide.height_m()
            )));
        }
        Ok(SystemGeometry {
            bs_position,
            relay_rx_position,
            waveguide,
            service_area,
            bs_relay_distance_m,
        })
    }

    /// Canonical single-waveguide layout over a square area.
    ///
    /// The waveguide feed is at the area edge, mid-way along y; the relay
    /// receive antenna is `feed_offset_m` behind the feed; the BS is
    /// `bs_relay_distance_m` behind the relay receive antenna, at waveguide
    /// height.
    pub fn canonical(
        bs_relay_distance_m: f64,
        area_side_m: f64,
        height_m: f64,
        span_m: f64,
        feed_offset_m: f64,
    ) -> Result<SystemGeometry> {
        if !bs_relay_distance_m.is_finite() || bs_relay_distance_m <= 0.0 {
            return Err(SimError::OutOfRange {
                what: "bs_relay_distance",
                detail: format!("must be finite and > 0 m, got {bs_relay_distance_m}"),
            });
        }
        if !feed_offset_m.is_finite() || feed_offset_m < 0.0 {
            return Err(SimError::OutOfRange {
                what: "relay_feed_offset",
                detail: format!("must be finite and >= 0 m, got {feed_offset_m}"),
            });
        }
        let mid_y = area_side_m / 2.0;
        let feed = Point3::new(0.0, mid_y, height_m)?;
        let relay_rx = Point3::new(-feed_offset_m, mid_y, height_m)?;
        let bs = Point3::new(-feed_offset_m - bs_relay_distance_m, mid_y, height_m)?;
        let waveguide = Waveguide::new(feed, (1.0, 0.0, 0.0), span_m)?;
        let area = ServiceArea::new(Point3::new(0.0, 0.0, 0.0)?, area_side_m, area_side_m)?;
        SystemGeometry::new(bs, relay_rx, waveguide, area, bs_relay_distance_m)
    }
}

/// Draw one user uniformly over the service area, on the area's ground plane.
pub fn draw_user<R: Rng + ?Sized>(area: &ServiceArea, rng: &mut R) -> Point3 {
    let o = area.origin();
    // gen::<f64>() is uniform on [0,1); a zero side collapses to the corner.
    let x = o.x + rng.gen::<f64>() * area.side_x_m();
    let y = o.y + rng.gen::<f64>() * area.side_y_m();
    Point3 { x, y, z: o.z }
}

/// Position of the single active PA serving `user`: the point of the
/// waveguide segment closest to the user (orthogonal projection onto the
/// axis, clamped to the segment).
pub fn pa_position_for_user(wg: &Waveguide, user: Point3) -> Point3 {
    let feed = wg.feed_point();
    let (ax, ay, az) = wg.axis();
    let t = (user.x - feed.x) * ax + (user.y - feed.y) * ay + (user.z - feed.z) * az;
    wg.point_at(t.clamp(0.0, wg.span_m()))
}

/// Arc length along the waveguide from the feed to `pa`, in [0, span].
///
/// Rejects points that do not lie on the segment (tolerance
/// [`ON_SEGMENT_TOL_M`]).
pub fn arc_length_to_pa(wg: &Waveguide, pa: Point3) -> Result<f64> {
    let feed = wg.feed_point();
    let (ax, ay, az) = wg.axis();
    let t = (pa.x - feed.x) * ax + (pa.y - feed.y) * ay + (pa.z - feed.z) * az;
    let clamped = t.clamp(0.0, wg.span_m());
    let off_axis = distance(pa, wg.point_at(clamped));
    if off_axis > ON_SEGMENT_TOL_M {
        return Err(SimError::Geometry(format!(
            "point ({}, {}, {}) is {off_axis} m off the waveguide segment",
            pa.x, pa.y, pa.z
        )));
    }
    Ok(clamped)
}
