//! Natural cubic spline interpolation on a strictly increasing grid.

use num_complex::Complex64;

/// Cubic spline with natural (zero second derivative) end conditions.
#[derive(Debug, Clone)]
pub struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the nodes.
    m: Vec<f64>,
}

impl Spline {
    pub fn new(x: &[f64], y: &[f64]) -> Spline {
        assert_eq!(x.len(), y.len());
        let n = x.len();
        assert!(n >= 3, "spline needs at least three nodes");
        assert!(x.windows(2).all(|w| w[1] > w[0]), "grid must be strictly increasing");
        // Tridiagonal system for the second derivatives, natural ends.
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        b[0] = 1.0;
        b[n - 1] = 1.0;
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        // Thomas algorithm.
        let mut cp = vec![0.0; n];
        let mut dp = vec![0.0; n];
        cp[0] = c[0] / b[0];
        dp[0] = d[0] / b[0];
        for i in 1..n {
            let den = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / den;
            dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
        }
        let mut m = vec![0.0; n];
        m[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = dp[i] - cp[i] * m[i + 1];
        }
        Spline { x: x.to_vec(), y: y.to_vec(), m }
    }

    fn segment(&self, xq: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    pub fn xmin(&self) -> f64 {
        self.x[0]
    }

    pub fn xmax(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let i = self.segment(xq);
        let h = self.x[i + 1] - self.x[i];
        let t0 = (self.x[i + 1] - xq) / h;
        let t1 = (xq - self.x[i]) / h;
        t0 * self.y[i]
            + t1 * self.y[i + 1]
            + ((t0 * t0 * t0 - t0) * self.m[i] + (t1 * t1 * t1 - t1) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn deriv(&self, xq: f64) -> f64 {
        let i = self.segment(xq);
        let h = self.x[i + 1] - self.x[i];
        let t0 = (self.x[i + 1] - xq) / h;
        let t1 = (xq - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * t1 * t1 - 1.0) * self.m[i + 1] - (3.0 * t0 * t0 - 1.0) * self.m[i]) * h / 6.0
    }
}

/// Complex-valued spline as a (re, im) pair.
#[derive(Debug, Clone)]
pub struct SplineC {
    re: Spline,
    im: Spline,
}

impl SplineC {
    pub fn new(x: &[f64], y: &[Complex64]) -> SplineC {
        let re: Vec<f64> = y.iter().map(|z| z.re).collect();
        let im: Vec<f64> = y.iter().map(|z| z.im).collect();
        SplineC { re: Spline::new(x, &re), im: Spline::new(x, &im) }
    }

    pub fn eval(&self, xq: f64) -> Complex64 {
        Complex64::new(self.re.eval(xq), self.im.eval(xq))
    }

    pub fn deriv(&self, xq: f64) -> Complex64 {
        Complex64::new(self.re.deriv(xq), self.im.deriv(xq))
    }

    pub fn xmax(&self) -> f64 {
        self.re.xmax()
    }
}

/// Cubic Hermite interpolation on a uniform grid from value and derivative
/// samples; C^1, locally O(h^4), and free of the end-condition artifacts a
/// natural spline would add where the data has curvature at the boundary.
pub struct Hermite {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    dy: Vec<f64>,
}

impl Hermite {
    pub fn new(x0: f64, h: f64, y: Vec<f64>, dy: Vec<f64>) -> Hermite {
        assert_eq!(y.len(), dy.len());
        assert!(y.len() >= 2 && h > 0.0);
        Hermite { x0, h, y, dy }
    }

    fn locate(&self, xq: f64) -> (usize, f64) {
        let s = ((xq - self.x0) / self.h).floor();
        let i = (s.max(0.0) as usize).min(self.y.len() - 2);
        (i, (xq - self.x0 - i as f64 * self.h) / self.h)
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let (i, t) = self.locate(xq);
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.y[i]
            + (t3 - 2.0 * t2 + t) * self.h * self.dy[i]
            + (-2.0 * t3 + 3.0 * t2) * self.y[i + 1]
            + (t3 - t2) * self.h * self.dy[i + 1]
    }

    pub fn deriv(&self, xq: f64) -> f64 {
        let (i, t) = self.locate(xq);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * self.y[i]
            + (3.0 * t2 - 4.0 * t + 1.0) * self.h * self.dy[i]
            + (-6.0 * t2 + 6.0 * t) * self.y[i + 1]
            + (3.0 * t2 - 2.0 * t) * self.h * self.dy[i + 1])
            / self.h
    }

    pub fn xmax(&self) -> f64 {
        self.x0 + self.h * (self.y.len() - 1) as f64
    }
}

/// Complex-valued Hermite interpolant as a (re, im) pair.
pub struct HermiteC {
    re: Hermite,
    im: Hermite,
}

impl HermiteC {
    pub fn new(x0: f64, h: f64, y: &[Complex64], dy: &[Complex64]) -> HermiteC {
        HermiteC {
            re: Hermite::new(x0, h, y.iter().map(|z| z.re).collect(), dy.iter().map(|z| z.re).collect()),
            im: Hermite::new(x0, h, y.iter().map(|z| z.im).collect(), dy.iter().map(|z| z.im).collect()),
        }
    }

    pub fn eval(&self, xq: f64) -> Complex64 {
        Complex64::new(self.re.eval(xq), self.im.eval(xq))
    }

    pub fn xmax(&self) -> f64 {
        self.re.xmax()
    }
}
