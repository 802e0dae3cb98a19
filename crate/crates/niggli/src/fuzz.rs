//! Scale-aware fuzzy comparisons.
//!
//! G6 is a cone through the origin, so every equality test has to be
//! relative to the magnitude of the quantities involved. Comparisons of
//! the form `x = y` use `|x - y| <= tol * max(|x|, |y|, floor)` where
//! `floor` is a per-vector scale (typically g3, the largest squared edge).

#[derive(Debug, Clone, Copy)]
pub struct Fuzz {
    tol: f64,
    floor: f64,
}

impl Fuzz {
    pub fn new(tol: f64, floor: f64) -> Fuzz {
        Fuzz {
            tol,
            floor: floor.abs(),
        }
    }

    /// Comparator scaled for a G6 vector: the floor is the largest |g_i|.
    pub fn for_g6(g: &[f64; 6], tol: f64) -> Fuzz {
        let floor = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Fuzz::new(tol, floor)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn eps(&self, x: f64, y: f64) -> f64 {
        self.tol * x.abs().max(y.abs()).max(self.floor)
    }

    pub fn eq(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.eps(x, y)
    }

    pub fn lt(&self, x: f64, y: f64) -> bool {
        x < y - self.eps(x, y)
    }

    pub fn gt(&self, x: f64, y: f64) -> bool {
        self.lt(y, x)
    }

    pub fn le(&self, x: f64, y: f64) -> bool {
        !self.gt(x, y)
    }

    pub fn ge(&self, x: f64, y: f64) -> bool {
        !self.lt(x, y)
    }

    pub fn is_zero(&self, x: f64) -> bool {
        self.eq(x, 0.0)
    }

    /// Sign with a dead zone: -1, 0 or +1.
    pub fn sign(&self, x: f64) -> i32 {
        if self.is_zero(x) {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    }
}
