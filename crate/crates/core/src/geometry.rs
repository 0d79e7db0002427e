//! Rotation representations (quaternion, intrinsic-XYZ Euler angles, 3x3
//! matrix), conversions between them, and camera-center recovery from
//! world-to-camera poses.
//!
//! Quaternions are stored scalar-first `(w, x, y, z)`, matching the COLMAP
//! file column order `QW QX QY QZ`. Canonical quaternions have `w >= 0`
//! (ties broken by the first nonzero of x, y, z being nonnegative) so that
//! round-trip tests are deterministic.

use thiserror::Error;

/// Orthonormality tolerance for rotation matrices produced by conversions.
pub const ORTHONORMAL_TOL: f64 = 1e-9;
/// Tolerance used when validating a caller-supplied rotation matrix.
pub const ROTATION_INPUT_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// Quaternion norm is at or below 1e-12 and cannot be normalized.
    #[error("quaternion norm {norm:.3e} too small to normalize")]
    ZeroQuaternion { norm: f64 },
    /// Matrix failed the orthonormality or determinant check.
    #[error("matrix is not a rotation: max |R^T R - I| = {ortho_err:.3e}, det = {det}")]
    NotARotation { ortho_err: f64, det: f64 },
    #[error("non-finite input")]
    NonFiniteInput,
}

/// 3-vector of f64. Meters when used as a position, dimensionless as a
/// direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(&self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }

    /// Component-wise array view, x/y/z order.
    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl std::ops::Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation quaternion, scalar-first storage `(w, x, y, z)`.
///
/// Not forced to unit norm on construction; operations that need a rotation
/// normalize first and fail with [`GeometryError::ZeroQuaternion`] when the
/// norm is at or below 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let u = axis.normalized();
        let (s, c) = (angle * 0.5).sin_cos();
        Quaternion::new(c, u.x * s, u.y * s, u.z * s)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn conjugate(&self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Unit quaternion with the same direction, or an error when the norm is
    /// at or below 1e-12.
    pub fn normalized(&self) -> Result<Quaternion, GeometryError> {
        if !self.is_finite() {
            return Err(GeometryError::NonFiniteInput);
        }
        let n = self.norm();
        if n <= 1e-12 {
            return Err(GeometryError::ZeroQuaternion { norm: n });
        }
        Ok(Quaternion::new(self.w / n, self.x / n, self.y / n, self.z / n))
    }

    /// Flips sign so that w >= 0; on w == 0 the first nonzero of x, y, z is
    /// made nonnegative. q and -q are the same rotation, so this is free.
    pub fn canonicalized(&self) -> Quaternion {
        let flip = if self.w != 0.0 {
            self.w < 0.0
        } else if self.x != 0.0 {
            self.x < 0.0
        } else if self.y != 0.0 {
            self.y < 0.0
        } else {
            self.z < 0.0
        };
        if flip {
            Quaternion::new(-self.w, -self.x, -self.y, -self.z)
        } else {
            *self
        }
    }

    /// Normalize then canonicalize.
    pub fn unit_canonical(&self) -> Result<Quaternion, GeometryError> {
        Ok(self.normalized()?.canonicalized())
    }

    /// Rotate a vector by this quaternion (normalizes first).
    pub fn rotate(&self, v: Vec3) -> Result<Vec3, GeometryError> {
        Ok(self.to_matrix()?.apply(v))
    }

    /// Rotation matrix of the normalized quaternion.
    pub fn to_matrix(&self) -> Result<RotationMatrix, GeometryError> {
        let q = self.normalized()?;
        let (w, x, y, z) = (q.w, q.x, q.y, q.z);
        Ok(RotationMatrix {
            m: [
                [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
                [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
                [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
            ],
        })
    }
}

impl std::ops::Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product; `q1 * q2` rotates by q2 first, then q1.
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

/// Intrinsic XYZ Euler angles in radians: rotation about X, then Y, then Z,
/// equivalent to the extrinsic matrix product `R = Rz(rz) * Ry(ry) * Rx(rx)`.
/// This is Blender's default "XYZ Euler" convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerXyz {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl EulerXyz {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Self {
        EulerXyz { rx, ry, rz }
    }

    /// Quaternion of `Rz(rz) * Ry(ry) * Rx(rx)`, canonicalized.
    pub fn to_quaternion(&self) -> Result<Quaternion, GeometryError> {
        if !(self.rx.is_finite() && self.ry.is_finite() && self.rz.is_finite()) {
            return Err(GeometryError::NonFiniteInput);
        }
        let qx = Quaternion::from_axis_angle(Vec3::new(1.0, 0.0, 0.0), self.rx);
        let qy = Quaternion::from_axis_angle(Vec3::new(0.0, 1.0, 0.0), self.ry);
        let qz = Quaternion::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), self.rz);
        Ok((qz * qy * qx).canonicalized())
    }

    /// Extract angles from a rotation matrix. At gimbal lock (|ry| = pi/2)
    /// rx is fixed to 0; the returned angles reproduce the matrix but may
    /// differ from the original triple.
    pub fn from_matrix(r: &RotationMatrix) -> EulerXyz {
        let m = &r.m;
        // R = Rz*Ry*Rx has m[2][0] = -sin(ry).
        let sy = -m[2][0];
        if sy.abs() < 1.0 - 1e-12 {
            EulerXyz {
                rx: m[2][1].atan2(m[2][2]),
                ry: sy.asin(),
                rz: m[1][0].atan2(m[0][0]),
            }
        } else {
            // Gimbal lock: only rx+rz (or rx-rz) observable; pin rx = 0.
            EulerXyz {
                rx: 0.0,
                ry: if sy > 0.0 { std::f64::consts::FRAC_PI_2 } else { -std::f64::consts::FRAC_PI_2 },
                rz: (-m[0][1]).atan2(m[1][1]),
            }
        }
    }
}

/// Row-major 3x3 rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix {
    pub m: [[f64; 3]; 3],
}

impl RotationMatrix {
    pub const IDENTITY: RotationMatrix =
        RotationMatrix { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    /// Wrap a row-major array after checking R^T R = I and det = +1 to 1e-6.
    pub fn from_rows(m: [[f64; 3]; 3]) -> Result<Self, GeometryError> {
        let r = RotationMatrix { m };
        let (ortho_err, det) = r.rotation_defect();
        if ortho_err > ROTATION_INPUT_TOL || (det - 1.0).abs() > ROTATION_INPUT_TOL {
            return Err(GeometryError::NotARotation { ortho_err, det });
        }
        Ok(r)
    }

    /// Build from orthonormal column vectors (right-handed, det +1 assumed
    /// up to the validation tolerance).
    pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Result<Self, GeometryError> {
        RotationMatrix::from_rows([
            [c0.x, c1.x, c2.x],
            [c0.y, c1.y, c2.y],
            [c0.z, c1.z, c2.z],
        ])
    }

    /// Max abs entry of R^T R - I, and det(R).
    pub fn rotation_defect(&self) -> (f64, f64) {
        let m = &self.m;
        let mut max_err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                // (R^T R)[i][j] = column_i . column_j
                let v: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                max_err = max_err.max((v - target).abs());
            }
        }
        (max_err, self.det())
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn transpose(&self) -> RotationMatrix {
        let m = &self.m;
        RotationMatrix {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    /// Canonical unit quaternion of this matrix, validated to 1e-6 first.
    /// Uses the largest-diagonal (Shepperd) branch for stability near
    /// 180-degree rotations.
    pub fn to_quaternion(&self) -> Result<Quaternion, GeometryError> {
        let (ortho_err, det) = self.rotation_defect();
        if ortho_err > ROTATION_INPUT_TOL || (det - 1.0).abs() > ROTATION_INPUT_TOL {
            return Err(GeometryError::NotARotation { ortho_err, det });
        }
        let m = &self.m;
        let trace = m[0][0] + m[1][1] + m[2][2];
        let q = if trace > m[0][0] && trace > m[1][1] && trace > m[2][2] {
            let s = (trace + 1.0).sqrt() * 2.0; // 4w
            Quaternion::new(
                0.25 * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0; // 4x
            Quaternion::new(
                (m[2][1] - m[1][2]) / s,
                0.25 * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if m[1][1] > m[2][2] {
            let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0; // 4y
            Quaternion::new(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                0.25 * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0; // 4z
            Quaternion::new(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                0.25 * s,
            )
        };
        q.unit_canonical()
    }

    pub fn mul(&self, other: &RotationMatrix) -> RotationMatrix {
        let (a, b) = (&self.m, &other.m);
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        RotationMatrix { m: out }
    }
}

/// Camera center `C = -R(q)^T t` from a world-to-camera pose, satisfying
/// `R(q) C + t = 0`. COLMAP's images.txt stores poses in this convention.
pub fn camera_center_from_w2c(q: &Quaternion, t: Vec3) -> Result<Vec3, GeometryError> {
    if !t.is_finite() {
        return Err(GeometryError::NonFiniteInput);
    }
    let r = q.to_matrix()?;
    Ok(-r.transpose().apply(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_mat_eq(a: &RotationMatrix, b: &RotationMatrix, tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (a.m[i][j] - b.m[i][j]).abs() <= tol,
                    "entry ({i},{j}): {} vs {}",
                    a.m[i][j],
                    b.m[i][j]
                );
            }
        }
    }

    /// Rodrigues formula: R = I + sin(t) K + (1-cos(t)) K^2 for unit axis k.
    /// Independent of the quaternion path; used as the conversion oracle.
    fn rodrigues(axis: Vec3, angle: f64) -> RotationMatrix {
        let k = axis.normalized();
        let (s, c) = angle.sin_cos();
        let kx = [[0.0, -k.z, k.y], [k.z, 0.0, -k.x], [-k.y, k.x, 0.0]];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let k2: f64 = (0..3).map(|l| kx[i][l] * kx[l][j]).sum();
                m[i][j] = if i == j { 1.0 } else { 0.0 } + s * kx[i][j] + (1.0 - c) * k2;
            }
        }
        RotationMatrix { m }
    }

    fn random_unit_quat(rng: &mut CounterRng) -> Quaternion {
        loop {
            let q = Quaternion::new(
                rng.next_normal(),
                rng.next_normal(),
                rng.next_normal(),
                rng.next_normal(),
            );
            if q.norm() > 1e-3 {
                return q.unit_canonical().unwrap();
            }
        }
    }

    #[test]
    fn quat_to_rotmat_identity() {
        let r = Quaternion::IDENTITY.to_matrix().unwrap();
        assert_mat_eq(&r, &RotationMatrix::IDENTITY, 0.0);
    }

    #[test]
    fn quat_to_rotmat_90deg_about_z() {
        // Oracle: Rodrigues formula on axis (0,0,1), angle pi/2.
        let oracle = rodrigues(Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2);
        let r = Quaternion::new(SQRT_HALF, 0.0, 0.0, SQRT_HALF).to_matrix().unwrap();
        assert_mat_eq(&r, &oracle, 1e-15);
        let expected = RotationMatrix { m: [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]] };
        assert_mat_eq(&r, &expected, 1e-15);
    }

    #[test]
    fn quat_matrix_round_trip_100_random() {
        let mut rng = CounterRng::new(0x67e0_11aa, 1);
        for _ in 0..100 {
            let q = random_unit_quat(&mut rng);
            let back = q.to_matrix().unwrap().to_quaternion().unwrap();
            assert!((q.w - back.w).abs() <= 1e-12);
            assert!((q.x - back.x).abs() <= 1e-12);
            assert!((q.y - back.y).abs() <= 1e-12);
            assert!((q.z - back.z).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_quaternion_rejected() {
        let err = Quaternion::new(0.0, 0.0, 0.0, 1e-13).to_matrix().unwrap_err();
        assert!(matches!(err, GeometryError::ZeroQuaternion { .. }));
    }

    #[test]
    fn rotmat_to_quat_identity() {
        let q = RotationMatrix::IDENTITY.to_quaternion().unwrap();
        assert_eq!(q, Quaternion::IDENTITY);
    }

    #[test]
    fn rotmat_to_quat_90deg_about_z() {
        let r = RotationMatrix::from_rows([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
            .unwrap();
        let q = r.to_quaternion().unwrap();
        assert!((q.w - SQRT_HALF).abs() <= 1e-15);
        assert!(q.x.abs() <= 1e-15);
        assert!(q.y.abs() <= 1e-15);
        assert!((q.z - SQRT_HALF).abs() <= 1e-15);
    }

    #[test]
    fn rotmat_to_quat_trace_near_minus_one() {
        // 180 degrees about x; axis-angle oracle says q = (0, 1, 0, 0).
        let oracle = rodrigues(Vec3::new(1.0, 0.0, 0.0), std::f64::consts::PI);
        let q = oracle.to_quaternion().unwrap();
        assert!(q.w.abs() <= 1e-12);
        assert!((q.x - 1.0).abs() <= 1e-12);
        assert!(q.y.abs() <= 1e-12);
        assert!(q.z.abs() <= 1e-12);
    }

    #[test]
    fn rotmat_to_quat_rejects_non_rotation() {
        let scaled = RotationMatrix { m: [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]] };
        assert!(matches!(scaled.to_quaternion(), Err(GeometryError::NotARotation { .. })));
        let reflection = RotationMatrix { m: [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };
        assert!(matches!(reflection.to_quaternion(), Err(GeometryError::NotARotation { .. })));
    }

    #[test]
    fn euler_identity() {
        let q = EulerXyz::new(0.0, 0.0, 0.0).to_quaternion().unwrap();
        assert_eq!(q, Quaternion::IDENTITY);
    }

    #[test]
    fn euler_single_axis_x() {
        // Oracle: Rx(pi/2) alone.
        let q = EulerXyz::new(std::f64::consts::FRAC_PI_2, 0.0, 0.0).to_quaternion().unwrap();
        assert!((q.w - SQRT_HALF).abs() <= 1e-15);
        assert!((q.x - SQRT_HALF).abs() <= 1e-15);
        assert!(q.y.abs() <= 1e-15);
        assert!(q.z.abs() <= 1e-15);
    }

    #[test]
    fn euler_matches_matrix_product_oracle() {
        let mut rng = CounterRng::new(0x67e0_11ab, 2);
        for _ in 0..200 {
            let e = EulerXyz::new(
                (rng.next_f64() - 0.5) * 8.0,
                (rng.next_f64() - 0.5) * 8.0,
                (rng.next_f64() - 0.5) * 8.0,
            );
            // Oracle: build Rz * Ry * Rx from single-axis Rodrigues matrices,
            // convert with rotmat_to_quat.
            let rx = rodrigues(Vec3::new(1.0, 0.0, 0.0), e.rx);
            let ry = rodrigues(Vec3::new(0.0, 1.0, 0.0), e.ry);
            let rz = rodrigues(Vec3::new(0.0, 0.0, 1.0), e.rz);
            let oracle = rz.mul(&ry).mul(&rx).to_quaternion().unwrap();
            let q = e.to_quaternion().unwrap();
            assert!((q.w - oracle.w).abs() <= 1e-12, "{e:?}");
            assert!((q.x - oracle.x).abs() <= 1e-12);
            assert!((q.y - oracle.y).abs() <= 1e-12);
            assert!((q.z - oracle.z).abs() <= 1e-12);
        }
    }

    #[test]
    fn euler_matrix_round_trip_at_gimbal_lock() {
        for ry in [std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2] {
            let e = EulerXyz::new(0.7, ry, -1.3);
            let r = e.to_quaternion().unwrap().to_matrix().unwrap();
            let (ortho_err, det) = r.rotation_defect();
            assert!(ortho_err <= ORTHONORMAL_TOL);
            assert!((det - 1.0).abs() <= ORTHONORMAL_TOL);
            // Angles may differ, the matrix must not.
            let back = EulerXyz::from_matrix(&r).to_quaternion().unwrap().to_matrix().unwrap();
            assert_mat_eq(&r, &back, 1e-12);
        }
    }

    #[test]
    fn camera_center_identity_rotation() {
        let c = camera_center_from_w2c(&Quaternion::IDENTITY, Vec3::new(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(c, Vec3::new(-1.0, -2.0, -3.0));
    }

    #[test]
    fn camera_center_90deg_about_z() {
        // Hand-applied R^T = Rz(-90): C = -Rz(-90) * (1,0,0) = (0,1,0).
        let q = Quaternion::new(SQRT_HALF, 0.0, 0.0, SQRT_HALF);
        let c = camera_center_from_w2c(&q, Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((c.x - 0.0).abs() <= 1e-15);
        assert!((c.y - 1.0).abs() <= 1e-15);
        assert!((c.z - 0.0).abs() <= 1e-15);
    }

    #[test]
    fn camera_center_defining_identity() {
        // R(q) C + t = 0 is the definition; check on random poses.
        let mut rng = CounterRng::new(0x67e0_11ac, 3);
        for _ in 0..100 {
            let q = random_unit_quat(&mut rng);
            let t = Vec3::new(
                rng.next_normal() * 10.0,
                rng.next_normal() * 10.0,
                rng.next_normal() * 10.0,
            );
            let c = camera_center_from_w2c(&q, t).unwrap();
            let back = q.to_matrix().unwrap().apply(c) + t;
            assert!(back.norm() <= 1e-9);
        }
    }

    #[test]
    fn negated_quaternion_same_matrix_exactly() {
        let mut rng = CounterRng::new(0x67e0_11ad, 4);
        for _ in 0..50 {
            let q = random_unit_quat(&mut rng);
            let n = Quaternion::new(-q.w, -q.x, -q.y, -q.z);
            assert_eq!(q.to_matrix().unwrap(), n.to_matrix().unwrap());
        }
    }

    #[test]
    fn quaternion_composition_matches_matrix_product() {
        let mut rng = CounterRng::new(0x67e0_11ae, 5);
        for _ in 0..100 {
            let q1 = random_unit_quat(&mut rng);
            let q2 = random_unit_quat(&mut rng);
            let lhs = (q1 * q2).to_matrix().unwrap();
            let rhs = q1.to_matrix().unwrap().mul(&q2.to_matrix().unwrap());
            assert_mat_eq(&lhs, &rhs, 1e-9);
        }
    }

    #[test]
    fn canonicalization_tie_break() {
        let q = Quaternion::new(0.0, -1.0, 0.0, 0.0).canonicalized();
        assert_eq!(q, Quaternion::new(0.0, 1.0, 0.0, 0.0));
        let q = Quaternion::new(0.0, 0.0, -1.0, 0.0).canonicalized();
        assert_eq!(q, Quaternion::new(0.0, 0.0, 1.0, 0.0));
    }
}
