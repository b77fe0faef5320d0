use std::ops::{Add, Mul, Neg, Sub};

/// Dense real 3x3 matrix, row-major. Used for deformation gradients,
/// rotations and velocity gradients; symmetric/skew quantities get their
/// own types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const fn new(m: [[f64; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub fn zero() -> Self {
        Mat3::new([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Mat3::new(m)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Mat3::new([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Rotation about the z-axis by angle `theta`.
    pub fn rotation_z(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat3::new([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = self.m[j][i];
            }
        }
        Mat3::new(t)
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse via the adjugate. Returns `None` when |det| < 1e-300.
    pub fn try_inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.abs() < 1e-300 {
            return None;
        }
        let m = &self.m;
        let inv = [
            [
                (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d,
                (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d,
                (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d,
            ],
            [
                (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d,
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d,
                (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d,
            ],
            [
                (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d,
                (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d,
                (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d,
            ],
        ];
        Some(Mat3::new(inv))
    }

    /// Cofactor matrix, Cof(F) = det(F) F^{-T} for invertible F.
    pub fn cofactor(&self) -> Self {
        let m = &self.m;
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
                let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
                c[i][j] = m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1];
            }
        }
        Mat3::new(c)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = self.m;
        for row in &mut m {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        Mat3::new(m)
    }

    /// Frobenius inner product tr(A B^T).
    pub fn inner(&self, other: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.m[i][j] * other.m[i][j];
            }
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2];
        }
        out
    }

    pub fn outer(a: [f64; 3], b: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j];
            }
        }
        Mat3::new(m)
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut m = self.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += rhs.m[i][j];
            }
        }
        Mat3::new(m)
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        let mut m = self.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= rhs.m[i][j];
            }
        }
        Mat3::new(m)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for (k, rhs_row) in rhs.m.iter().enumerate() {
                    s += self.m[i][k] * rhs_row[j];
                }
                out[i][j] = s;
            }
        }
        Mat3::new(out)
    }
}

impl Mul<Mat3> for f64 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        rhs.scale(self)
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-1.0)
    }
}
