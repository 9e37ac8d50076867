//! Minimal 3-vector helpers over `[f64; 3]`.

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm_sq(a: [f64; 3]) -> f64 {
    dot(a, a)
}

pub fn norm(a: [f64; 3]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Any unit vector orthogonal to `a` (for building local frames).
pub fn orthonormal_to(a: [f64; 3]) -> [f64; 3] {
    let n = norm(a);
    if n == 0.0 {
        return [1.0, 0.0, 0.0];
    }
    let u = scale(a, 1.0 / n);
    // cross with the axis u is least aligned with
    let e = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() <= u[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let c = cross(u, e);
    scale(c, 1.0 / norm(c))
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
