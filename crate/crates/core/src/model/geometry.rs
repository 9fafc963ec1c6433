use serde::{Deserialize, Serialize};

/// Axis-aligned box in page pixels. Origin is the top-left corner of the
/// page and `y` grows downward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BoundingBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl From<[f64; 4]> for BoundingBox {
    fn from([x, y, w, h]: [f64; 4]) -> Self {
        Self { x, y, w, h }
    }
}

impl From<BoundingBox> for [f64; 4] {
    fn from(b: BoundingBox) -> Self {
        [b.x, b.y, b.w, b.h]
    }
}

/// Length of the intersection of two closed intervals, zero when they are
/// disjoint or only touch.
#[inline]
pub fn interval_overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

impl BoundingBox {
    pub const fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    #[inline]
    pub fn left(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn top(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    #[inline]
    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// True when the box has finite coordinates and strictly positive size.
    pub fn is_well_formed(&self) -> bool {
        [self.x, self.y, self.w, self.h].iter().all(|v| v.is_finite()) && self.w > 0.0 && self.h > 0.0
    }

    /// True when the box lies inside a `width` x `height` page.
    pub fn fits_within(&self, width: f64, height: f64) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.right() <= width && self.bottom() <= height
    }

    /// Overlap length of the two x-intervals.
    pub fn x_overlap(&self, other: &Self) -> f64 {
        interval_overlap(self.left(), self.right(), other.left(), other.right())
    }

    /// Overlap length of the two y-intervals.
    pub fn y_overlap(&self, other: &Self) -> f64 {
        interval_overlap(self.top(), self.bottom(), other.top(), other.bottom())
    }

    pub fn intersection_area(&self, other: &Self) -> f64 {
        self.x_overlap(other) * self.y_overlap(other)
    }

    /// Intersection over union. Symmetric, 1 for identical boxes and 0 for
    /// boxes that are disjoint or merely touch.
    pub fn iou(&self, other: &Self) -> f64 {
        let inter = self.intersection_area(other);
        if inter <= 0.0 {
            return 0.0;
        }
        // Extents from the edges, so that identical boxes give exactly 1.
        let extent = |b: &Self| (b.right() - b.left()) * (b.bottom() - b.top());
        let union = extent(self) + extent(other) - inter;
        (inter / union).clamp(0.0, 1.0)
    }

    /// Smallest box enclosing both.
    pub fn union(&self, other: &Self) -> Self {
        let x0 = self.left().min(other.left());
        let y0 = self.top().min(other.top());
        let x1 = self.right().max(other.right());
        let y1 = self.bottom().max(other.bottom());
        Self::new(x0, y0, x1 - x0, y1 - y0)
    }

    /// Euclidean length of the whitespace between the two boxes; 0 when they
    /// touch or intersect.
    pub fn gap_distance(&self, other: &Self) -> f64 {
        let dx = (self.left().max(other.left()) - self.right().min(other.right())).max(0.0);
        let dy = (self.top().max(other.top()) - self.bottom().min(other.bottom())).max(0.0);
        dx.hypot(dy)
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.x + dx, self.y + dy, self.w, self.h)
    }
}

/// Free-function form of [`BoundingBox::iou`].
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    a.iou(b)
}
