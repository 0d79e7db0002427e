//! Camera trajectory types, streaming parsers for COLMAP `images.txt` and
//! Blender-style CSV exports, the canonical interchange format, and
//! correspondence matching between trajectories.
//!
//! COLMAP files interleave pose lines with feature-point lines that can be
//! hundreds of megabytes in total; the parser skips those in bounded chunks
//! so peak memory grows with image count, never with file size.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::geometry::{camera_center_from_w2c, EulerXyz, Quaternion, Vec3};

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("malformed pose line {line}: {reason}")]
    MalformedPoseLine { line: usize, reason: String },
    #[error("pose line {line} has no following points line at end of file")]
    DanglingPoseLine { line: usize },
    #[error("duplicate image name {name:?}")]
    DuplicateImageName { name: String },
    #[error("duplicate frame key {key}")]
    DuplicateFrameKey { key: u64 },
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("frame keys are not strictly increasing at line {line}")]
    NonMonotonicFrames { line: usize },
    #[error("trajectory has no samples")]
    EmptyTrajectory,
    #[error("unsupported canonical schema version {found:?} (expected {expected:?})")]
    SchemaVersionMismatch { found: String, expected: String },
    #[error("malformed canonical document at line {line}: {reason}")]
    MalformedDocument { line: usize, reason: String },
    #[error("no digits in image name {name:?}")]
    NoDigitsInName { name: String },
    #[error("frame key in {name:?} does not fit in 64 bits")]
    FrameKeyOutOfRange { name: String },
    #[error("no overlapping frames between the two trajectories")]
    NoOverlap,
    #[error("by-order matching requires equal lengths (got {gt} and {est})")]
    LengthMismatch { gt: usize, est: usize },
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How the orientation of a sample was obtained. Stored poses are always
/// resolved to camera center + camera-to-world orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoseConvention {
    CameraToWorld,
    ResolvedFromWorldToCamera,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectorySource {
    ColmapImagesTxt,
    BlenderExport,
    Canonical,
    Synthetic,
}

impl TrajectorySource {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrajectorySource::ColmapImagesTxt => "colmap-images-txt",
            TrajectorySource::BlenderExport => "blender-export",
            TrajectorySource::Canonical => "canonical",
            TrajectorySource::Synthetic => "synthetic",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        match s {
            "colmap-images-txt" => Some(TrajectorySource::ColmapImagesTxt),
            "blender-export" => Some(TrajectorySource::BlenderExport),
            "canonical" => Some(TrajectorySource::Canonical),
            "synthetic" => Some(TrajectorySource::Synthetic),
            _ => None,
        }
    }
}

/// Angle unit of the originating file; provenance only, all stored angles
/// are quaternions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerUnit {
    Radians,
    Degrees,
}

impl EulerUnit {
    pub fn as_str(&self) -> &'static str {
        match self {
            EulerUnit::Radians => "radians",
            EulerUnit::Degrees => "degrees",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        match s {
            "radians" => Some(EulerUnit::Radians),
            "degrees" => Some(EulerUnit::Degrees),
            _ => None,
        }
    }
}

/// One camera pose: camera center in meters plus camera-to-world
/// orientation, keyed by frame number.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseSample {
    pub frame_key: u64,
    pub image_name: Option<String>,
    pub position: Vec3,
    pub orientation: Quaternion,
    pub convention: PoseConvention,
}

/// Ordered pose list plus coordinate-frame label and source metadata.
/// Frame keys are strictly increasing; construction sorts and rejects
/// duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<PoseSample>,
    pub frame_label: String,
    pub source: TrajectorySource,
    pub euler_unit: EulerUnit,
}

impl Trajectory {
    pub fn new(
        mut samples: Vec<PoseSample>,
        frame_label: impl Into<String>,
        source: TrajectorySource,
        euler_unit: EulerUnit,
    ) -> Result<Self, TrajectoryError> {
        samples.sort_by_key(|s| s.frame_key);
        for w in samples.windows(2) {
            if w[0].frame_key == w[1].frame_key {
                return Err(TrajectoryError::DuplicateFrameKey { key: w[0].frame_key });
            }
        }
        Ok(Trajectory { samples, frame_label: frame_label.into(), source, euler_unit })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Camera centers in sample order.
    pub fn positions(&self) -> Vec<Vec3> {
        self.samples.iter().map(|s| s.position).collect()
    }
}

/// Parse result carrying non-fatal diagnostics (e.g. quaternions that had
/// to be renormalized).
#[derive(Debug)]
pub struct ParsedColmap {
    pub trajectory: Trajectory,
    pub warnings: Vec<String>,
}

/// Frame key = value of the last maximal run of ASCII digits in the file
/// stem of `image_name` (final path component, extension stripped).
///
/// `frame_0042.png` -> 42, and `cam2_shot_0100_v3.png` -> 3 because the
/// last run wins.
pub fn extract_frame_key(image_name: &str) -> Result<u64, TrajectoryError> {
    let stem_component = image_name
        .rsplit(['/', '\\'])
        .next()
        .unwrap_or(image_name);
    let stem = match stem_component.rfind('.') {
        Some(0) | None => stem_component,
        Some(i) => &stem_component[..i],
    };
    let bytes = stem.as_bytes();
    let mut end = bytes.len();
    while end > 0 {
        if bytes[end - 1].is_ascii_digit() {
            let mut start = end;
            while start > 0 && bytes[start - 1].is_ascii_digit() {
                start -= 1;
            }
            return stem[start..end]
                .parse::<u64>()
                .map_err(|_| TrajectoryError::FrameKeyOutOfRange { name: image_name.to_string() });
        }
        end -= 1;
    }
    Err(TrajectoryError::NoDigitsInName { name: image_name.to_string() })
}

/// Consume one line from `reader` without retaining it: scans buffered
/// chunks for the newline and discards them. Returns false at EOF with no
/// bytes consumed.
fn skip_line<R: BufRead>(reader: &mut R) -> std::io::Result<bool> {
    let mut saw_any = false;
    loop {
        let buf = reader.fill_buf()?;
        if buf.is_empty() {
            return Ok(saw_any);
        }
        saw_any = true;
        match buf.iter().position(|&b| b == b'\n') {
            Some(pos) => {
                reader.consume(pos + 1);
                return Ok(true);
            }
            None => {
                let len = buf.len();
                reader.consume(len);
            }
        }
    }
}

/// Parse a COLMAP `images.txt`. Lines starting with `#` are comments; each
/// image occupies two lines, `IMAGE_ID QW QX QY QZ TX TY TZ CAMERA_ID NAME`
/// followed by its 2D feature-point list. Point lines are skipped in
/// bounded chunks, so memory is proportional to the image count.
///
/// Positions are recovered as camera centers `C = -R^T t`; orientations are
/// stored camera-to-world (conjugate of the file quaternion). Samples are
/// keyed and sorted by the frame number extracted from NAME.
pub fn parse_colmap_images<R: BufRead>(mut reader: R) -> Result<ParsedColmap, TrajectoryError> {
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    let mut seen_names: HashSet<String> = HashSet::new();
    let mut line_no = 0usize;
    let mut line = String::new();

    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }

        let pose_line_no = line_no;
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 10 {
            return Err(TrajectoryError::MalformedPoseLine {
                line: pose_line_no,
                reason: format!("expected 10 fields, found {}", fields.len()),
            });
        }
        let parse_f64 = |s: &str, what: &str| -> Result<f64, TrajectoryError> {
            let v: f64 = s.parse().map_err(|_| TrajectoryError::MalformedPoseLine {
                line: pose_line_no,
                reason: format!("{what} {s:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(TrajectoryError::MalformedPoseLine {
                    line: pose_line_no,
                    reason: format!("{what} {s:?} is not finite"),
                });
            }
            Ok(v)
        };
        fields[0].parse::<u64>().map_err(|_| TrajectoryError::MalformedPoseLine {
            line: pose_line_no,
            reason: format!("IMAGE_ID {:?} is not an integer", fields[0]),
        })?;
        let qw = parse_f64(fields[1], "QW")?;
        let qx = parse_f64(fields[2], "QX")?;
        let qy = parse_f64(fields[3], "QY")?;
        let qz = parse_f64(fields[4], "QZ")?;
        let tx = parse_f64(fields[5], "TX")?;
        let ty = parse_f64(fields[6], "TY")?;
        let tz = parse_f64(fields[7], "TZ")?;
        fields[8].parse::<u64>().map_err(|_| TrajectoryError::MalformedPoseLine {
            line: pose_line_no,
            reason: format!("CAMERA_ID {:?} is not an integer", fields[8]),
        })?;
        let name = fields[9].to_string();

        if !seen_names.insert(name.clone()) {
            return Err(TrajectoryError::DuplicateImageName { name });
        }

        let q_file = Quaternion::new(qw, qx, qy, qz);
        let deviation = (q_file.norm() - 1.0).abs();
        let q_file = q_file.normalized().map_err(|_| TrajectoryError::MalformedPoseLine {
            line: pose_line_no,
            reason: "quaternion has near-zero norm".to_string(),
        })?;
        if deviation > 1e-3 {
            warnings.push(format!(
                "line {pose_line_no}: quaternion norm deviates from 1 by {deviation:.3e}; normalized"
            ));
        }

        let t = Vec3::new(tx, ty, tz);
        let position = camera_center_from_w2c(&q_file, t)?;
        let orientation = q_file.conjugate().canonicalized();
        let frame_key = extract_frame_key(&name)?;

        samples.push(PoseSample {
            frame_key,
            image_name: Some(name),
            position,
            orientation,
            convention: PoseConvention::ResolvedFromWorldToCamera,
        });

        // The following line is the feature-point list; drop it unbuffered.
        if !skip_line(&mut reader)? {
            return Err(TrajectoryError::DanglingPoseLine { line: pose_line_no });
        }
        line_no += 1;
    }

    if samples.is_empty() {
        return Err(TrajectoryError::EmptyTrajectory);
    }
    let trajectory =
        Trajectory::new(samples, "colmap-sfm", TrajectorySource::ColmapImagesTxt, EulerUnit::Radians)?;
    Ok(ParsedColmap { trajectory, warnings })
}

/// Parse a Blender-style camera export: header `frame,x,y,z,rx,ry,rz`, one
/// CSV record per rendered frame. Angles are interpreted per `unit`; the
/// position is taken verbatim as the camera center and the orientation is
/// camera-to-world.
pub fn parse_blender_export<R: BufRead>(
    reader: R,
    unit: EulerUnit,
) -> Result<Trajectory, TrajectoryError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(TrajectoryError::EmptyTrajectory),
    };
    if header.trim_end_matches('\r').trim() != "frame,x,y,z,rx,ry,rz" {
        return Err(TrajectoryError::MalformedRecord {
            line: 1,
            reason: format!("expected header \"frame,x,y,z,rx,ry,rz\", found {:?}", header.trim()),
        });
    }

    let mut samples = Vec::new();
    let mut last_key: Option<u64> = None;
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let trimmed = line.trim_end_matches('\r').trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 7 {
            return Err(TrajectoryError::MalformedRecord {
                line: line_no,
                reason: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let frame_key: u64 = fields[0].trim().parse().map_err(|_| {
            TrajectoryError::MalformedRecord {
                line: line_no,
                reason: format!("frame {:?} is not a nonnegative integer", fields[0]),
            }
        })?;
        if let Some(prev) = last_key {
            if frame_key <= prev {
                return Err(TrajectoryError::NonMonotonicFrames { line: line_no });
            }
        }
        last_key = Some(frame_key);

        let mut nums = [0.0f64; 6];
        for (i, f) in fields[1..].iter().enumerate() {
            let v: f64 = f.trim().parse().map_err(|_| TrajectoryError::MalformedRecord {
                line: line_no,
                reason: format!("field {:?} is not a number", f),
            })?;
            if !v.is_finite() {
                return Err(TrajectoryError::MalformedRecord {
                    line: line_no,
                    reason: format!("field {:?} is not finite", f),
                });
            }
            nums[i] = v;
        }
        let to_rad = match unit {
            EulerUnit::Radians => 1.0,
            EulerUnit::Degrees => std::f64::consts::PI / 180.0,
        };
        let euler = EulerXyz::new(nums[3] * to_rad, nums[4] * to_rad, nums[5] * to_rad);
        samples.push(PoseSample {
            frame_key,
            image_name: None,
            position: Vec3::new(nums[0], nums[1], nums[2]),
            orientation: euler.to_quaternion()?,
            convention: PoseConvention::CameraToWorld,
        });
    }

    if samples.is_empty() {
        return Err(TrajectoryError::EmptyTrajectory);
    }
    Trajectory::new(samples, "blender-world", TrajectorySource::BlenderExport, unit)
}

const CANONICAL_VERSION: &str = "sfmval-trajectory v1";

fn fmt_f64(v: f64) -> String {
    // 17 significant digits: exact f64 round trip.
    format!("{v:.16e}")
}

/// Write a trajectory in the canonical interchange format: version line,
/// `# key value` metadata lines, then one line per sample
/// (`frame_key image_name x y z qw qx qy qz`, `-` when the name is absent)
/// with 17-significant-digit decimals. Output is byte-stable for identical
/// input.
pub fn write_canonical<W: Write>(traj: &Trajectory, mut sink: W) -> Result<(), TrajectoryError> {
    if traj.is_empty() {
        return Err(TrajectoryError::EmptyTrajectory);
    }
    writeln!(sink, "{CANONICAL_VERSION}")?;
    writeln!(sink, "# label {}", traj.frame_label)?;
    writeln!(sink, "# source {}", traj.source.as_str())?;
    writeln!(sink, "# euler-unit {}", traj.euler_unit.as_str())?;
    for s in &traj.samples {
        let name = s.image_name.as_deref().unwrap_or("-");
        writeln!(
            sink,
            "{} {} {} {} {} {} {} {} {}",
            s.frame_key,
            name,
            fmt_f64(s.position.x),
            fmt_f64(s.position.y),
            fmt_f64(s.position.z),
            fmt_f64(s.orientation.w),
            fmt_f64(s.orientation.x),
            fmt_f64(s.orientation.y),
            fmt_f64(s.orientation.z),
        )?;
    }
    Ok(())
}

/// Read the canonical format written by [`write_canonical`]. Unknown
/// metadata keys and extra trailing fields on sample lines are ignored for
/// forward compatibility.
pub fn read_canonical<R: BufRead>(reader: R) -> Result<Trajectory, TrajectoryError> {
    let mut lines = reader.lines();
    let version = match lines.next() {
        Some(v) => v?,
        None => {
            return Err(TrajectoryError::MalformedDocument {
                line: 1,
                reason: "empty document".to_string(),
            })
        }
    };
    let version = version.trim_end_matches('\r');
    if version != CANONICAL_VERSION {
        return Err(TrajectoryError::SchemaVersionMismatch {
            found: version.to_string(),
            expected: CANONICAL_VERSION.to_string(),
        });
    }

    let mut frame_label = String::from("unlabeled");
    let mut source = TrajectorySource::Canonical;
    let mut euler_unit = EulerUnit::Radians;
    let mut samples = Vec::new();

    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let trimmed = line.trim_end_matches('\r').trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(meta) = trimmed.strip_prefix('#') {
            let meta = meta.trim_start();
            if let Some(rest) = meta.strip_prefix("label ") {
                frame_label = rest.to_string();
            } else if let Some(rest) = meta.strip_prefix("source ") {
                source = TrajectorySource::from_str(rest.trim()).ok_or_else(|| {
                    TrajectoryError::MalformedDocument {
                        line: line_no,
                        reason: format!("unknown source {:?}", rest.trim()),
                    }
                })?;
            } else if let Some(rest) = meta.strip_prefix("euler-unit ") {
                euler_unit = EulerUnit::from_str(rest.trim()).ok_or_else(|| {
                    TrajectoryError::MalformedDocument {
                        line: line_no,
                        reason: format!("unknown euler unit {:?}", rest.trim()),
                    }
                })?;
            }
            // Unknown metadata keys are ignored.
            continue;
        }

        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() < 9 {
            return Err(TrajectoryError::MalformedDocument {
                line: line_no,
                reason: format!("expected at least 9 fields, found {}", fields.len()),
            });
        }
        let frame_key: u64 = fields[0].parse().map_err(|_| TrajectoryError::MalformedDocument {
            line: line_no,
            reason: format!("frame key {:?} is not a nonnegative integer", fields[0]),
        })?;
        let image_name = if fields[1] == "-" { None } else { Some(fields[1].to_string()) };
        let mut nums = [0.0f64; 7];
        for (i, f) in fields[2..9].iter().enumerate() {
            nums[i] = f.parse().map_err(|_| TrajectoryError::MalformedDocument {
                line: line_no,
                reason: format!("field {f:?} is not a number"),
            })?;
            if !nums[i].is_finite() {
                return Err(TrajectoryError::MalformedDocument {
                    line: line_no,
                    reason: format!("field {f:?} is not finite"),
                });
            }
        }
        samples.push(PoseSample {
            frame_key,
            image_name,
            position: Vec3::new(nums[0], nums[1], nums[2]),
            orientation: Quaternion::new(nums[3], nums[4], nums[5], nums[6]),
            convention: PoseConvention::CameraToWorld,
        });
    }

    if samples.is_empty() {
        return Err(TrajectoryError::EmptyTrajectory);
    }
    Trajectory::new(samples, frame_label, source, euler_unit)
}

/// How to pair samples between two trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyMode {
    ByFrameKey,
    ByImageName,
    ByOrder,
}

/// Index pairs `(gt_index, est_index)`, sorted by ground-truth index.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceSet {
    pub pairs: Vec<(usize, usize)>,
    pub key_mode: KeyMode,
}

impl CorrespondenceSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Pair up samples of two trajectories. `ByFrameKey` joins on frame_key,
/// `ByImageName` on exact image name, `ByOrder` zips positionally and
/// requires equal lengths.
pub fn match_correspondences(
    gt: &Trajectory,
    est: &Trajectory,
    key_mode: KeyMode,
) -> Result<CorrespondenceSet, TrajectoryError> {
    if gt.is_empty() || est.is_empty() {
        return Err(TrajectoryError::EmptyTrajectory);
    }
    let mut pairs = Vec::new();
    match key_mode {
        KeyMode::ByFrameKey => {
            // Both sides are sorted by frame key: merge join.
            let (mut i, mut j) = (0usize, 0usize);
            while i < gt.samples.len() && j < est.samples.len() {
                let (a, b) = (gt.samples[i].frame_key, est.samples[j].frame_key);
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        pairs.push((i, j));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        KeyMode::ByImageName => {
            let index: HashMap<&str, usize> = est
                .samples
                .iter()
                .enumerate()
                .filter_map(|(j, s)| s.image_name.as_deref().map(|n| (n, j)))
                .collect();
            for (i, s) in gt.samples.iter().enumerate() {
                if let Some(name) = s.image_name.as_deref() {
                    if let Some(&j) = index.get(name) {
                        pairs.push((i, j));
                    }
                }
            }
        }
        KeyMode::ByOrder => {
            if gt.len() != est.len() {
                return Err(TrajectoryError::LengthMismatch { gt: gt.len(), est: est.len() });
            }
            pairs.extend((0..gt.len()).map(|i| (i, i)));
        }
    }
    if pairs.is_empty() {
        return Err(TrajectoryError::NoOverlap);
    }
    Ok(CorrespondenceSet { pairs, key_mode })
}
