use num_rational::Rational64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Mirror,
    Free,
}

/// One segment of a boundary circle. Mirror segments carry the name of the
/// reflection they realise; free segments may carry a cosmetic label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Segment {
    pub fn mirror(label: impl Into<String>) -> Self {
        Segment { kind: SegmentKind::Mirror, label: Some(label.into()) }
    }

    pub fn free() -> Self {
        Segment { kind: SegmentKind::Free, label: None }
    }

    pub fn is_mirror(&self) -> bool {
        self.kind == SegmentKind::Mirror
    }
}

/// Local structure at the point where two consecutive segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Junction {
    /// Right-angled corner reflector, stabilizer of order 4.
    Corner,
    /// Endpoint of a mirror on a free edge, stabilizer of order 2.
    Reflection,
    Plain,
}

impl Junction {
    pub fn stabilizer(self) -> i64 {
        match self {
            Junction::Corner => 4,
            Junction::Reflection => 2,
            Junction::Plain => 1,
        }
    }
}

/// A cyclic sequence of segments. Junction `j` sits at the end of segment
/// `j`, between segment `j` and segment `(j + 1) % len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryCircle {
    pub segments: Vec<Segment>,
}

impl BoundaryCircle {
    pub fn new(segments: Vec<Segment>) -> Self {
        BoundaryCircle { segments }
    }

    pub fn free(count: usize) -> Self {
        BoundaryCircle { segments: vec![Segment::free(); count] }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn next(&self, j: usize) -> usize {
        (j + 1) % self.segments.len()
    }

    pub fn prev(&self, j: usize) -> usize {
        (j + self.segments.len() - 1) % self.segments.len()
    }

    pub fn junction(&self, j: usize) -> Junction {
        let a = self.segments[j].is_mirror();
        let b = self.segments[self.next(j)].is_mirror();
        match (a, b) {
            (true, true) => Junction::Corner,
            (false, false) => Junction::Plain,
            _ => Junction::Reflection,
        }
    }

    pub fn mirror_count(&self) -> usize {
        self.segments.iter().filter(|s| s.is_mirror()).count()
    }

    pub fn free_count(&self) -> usize {
        self.segments.len() - self.mirror_count()
    }

    pub fn corner_count(&self) -> usize {
        (0..self.len()).filter(|&j| self.junction(j) == Junction::Corner).count()
    }
}

/// A compact orientable 2-orbifold with boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub id: String,
    pub genus: u32,
    pub boundary: Vec<BoundaryCircle>,
    #[serde(default)]
    pub cones: Vec<u32>,
}

/// Shape of a piece up to homeomorphism: genus, boundary count, sorted cone
/// orders and, for polygons, the mirror/free pattern of the boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceType {
    pub genus: u32,
    pub boundary_circles: usize,
    pub cones: Vec<u32>,
    pub mirrors: usize,
}

impl std::fmt::Display for PieceType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.mirrors > 0 {
            write!(f, "P({} mirrors", self.mirrors)?;
            if !self.cones.is_empty() {
                write!(f, ", {} cones", self.cones.len())?;
            }
            return write!(f, ")");
        }
        match (self.genus, self.boundary_circles) {
            (0, 1) => write!(f, "D2({} cones)", self.cones.len()),
            (0, 2) => write!(f, "A({} cones)", self.cones.len()),
            (g, b) if self.cones.is_empty() => write!(f, "S{{{g},{b}}}"),
            (g, b) => write!(f, "S{{{g},{b}}}({} cones)", self.cones.len()),
        }
    }
}

impl Piece {
    /// Disk with `cones` interior cone points of order 2 and a free boundary
    /// circle cut into `segments` segments.
    pub fn disk(id: impl Into<String>, cones: usize, segments: usize) -> Self {
        Piece { id: id.into(), genus: 0, boundary: vec![BoundaryCircle::free(segments)], cones: vec![2; cones] }
    }

    /// Orientable surface of genus `genus` with `circles` free boundary
    /// circles of one segment each.
    pub fn surface(id: impl Into<String>, genus: u32, circles: usize) -> Self {
        Piece { id: id.into(), genus, boundary: vec![BoundaryCircle::free(1); circles], cones: Vec::new() }
    }

    pub fn has_mirrors(&self) -> bool {
        self.boundary.iter().any(|c| c.mirror_count() > 0)
    }

    pub fn mirror_count(&self) -> usize {
        self.boundary.iter().map(BoundaryCircle::mirror_count).sum()
    }

    pub fn corner_count(&self) -> usize {
        self.boundary.iter().map(BoundaryCircle::corner_count).sum()
    }

    pub fn piece_type(&self) -> PieceType {
        let mut cones = self.cones.clone();
        cones.sort_unstable();
        PieceType { genus: self.genus, boundary_circles: self.boundary.len(), cones, mirrors: self.mirror_count() }
    }

    /// Orbifold Euler characteristic of the piece on its own.
    ///
    /// The open interior of a genus-`g` surface with `b` boundary circles has
    /// Euler characteristic `2 - 2g - b`; every boundary segment contributes
    /// `-1/|stab|` and every junction `+1/|stab|`; a cone of order `m`
    /// replaces a smooth point, deducting `1 - 1/m`.
    pub fn euler_characteristic(&self) -> Rational64 {
        let mut chi = Rational64::from_integer(2 - 2 * self.genus as i64 - self.boundary.len() as i64);
        for circle in &self.boundary {
            for (j, seg) in circle.segments.iter().enumerate() {
                let seg_stab = if seg.is_mirror() { 2 } else { 1 };
                chi -= Rational64::new(1, seg_stab);
                chi += Rational64::new(1, circle.junction(j).stabilizer());
            }
        }
        for &m in &self.cones {
            chi -= Rational64::new(m as i64 - 1, m as i64);
        }
        chi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(n: usize) -> Piece {
        let mut segments: Vec<Segment> = (0..n).map(|i| Segment::mirror(format!("s{i}"))).collect();
        segments.push(Segment::free());
        segments.push(Segment::free());
        Piece { id: "P".into(), genus: 0, boundary: vec![BoundaryCircle::new(segments)], cones: vec![] }
    }

    #[test]
    fn junction_kinds() {
        let p = polygon(3);
        let c = &p.boundary[0];
        assert_eq!(c.junction(0), Junction::Corner);
        assert_eq!(c.junction(2), Junction::Reflection);
        assert_eq!(c.junction(3), Junction::Plain);
        assert_eq!(c.junction(4), Junction::Reflection);
        assert_eq!(p.corner_count(), 2);
    }

    #[test]
    fn polygon_euler_characteristics() {
        assert_eq!(polygon(5).euler_characteristic(), Rational64::new(-1, 2));
        assert_eq!(polygon(7).euler_characteristic(), Rational64::from_integer(-1));
        assert_eq!(polygon(2).euler_characteristic(), Rational64::new(1, 4));
    }

    #[test]
    fn disks_and_surfaces() {
        assert_eq!(Piece::disk("d", 0, 1).euler_characteristic(), Rational64::from_integer(1));
        assert_eq!(Piece::disk("d", 6, 2).euler_characteristic(), Rational64::from_integer(-2));
        assert_eq!(Piece::surface("s", 3, 4).euler_characteristic(), Rational64::from_integer(-8));
        let annulus = Piece { cones: vec![2; 8], ..Piece::surface("a", 0, 2) };
        assert_eq!(annulus.euler_characteristic(), Rational64::from_integer(-4));
    }

    #[test]
    fn piece_type_display() {
        assert_eq!(Piece::disk("d", 6, 2).piece_type().to_string(), "D2(6 cones)");
        assert_eq!(Piece::surface("s", 7, 4).piece_type().to_string(), "S{7,4}");
        assert_eq!(polygon(5).piece_type().to_string(), "P(5 mirrors)");
    }
}
