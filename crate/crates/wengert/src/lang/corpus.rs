//! A small corpus of ready-made programs used by the CLI, tests, and
//! fuzz seeds.

/// A named program with its expected parameter list.
#[derive(Debug, Clone, Copy)]
pub struct CannedExample {
    pub name: &'static str,
    pub source: &'static str,
    pub params: &'static [&'static str],
}

/// The built-in example programs, in a fixed deterministic order.
///
/// `paper-f` is the two-variable function whose forward and reverse
/// traces the listings reproduce.
pub fn canned_examples() -> &'static [CannedExample] {
    &[
        CannedExample {
            name: "paper-f",
            source: "ln(x1) + x1*x2 - sin(x2)",
            params: &["x1", "x2"],
        },
        CannedExample {
            name: "abs-branch",
            source: "params x\nif x < 0:\n  y = -x\nelse:\n  y = x\nend\nreturn y",
            params: &["x"],
        },
        CannedExample {
            name: "fourth-power-loop",
            source: "params x\ns = 1\nrepeat 4:\n  s = s * x\nend\nreturn s",
            params: &["x"],
        },
        CannedExample {
            name: "polynomial",
            source: "3*x^2 - 2*x + 7",
            params: &["x"],
        },
        CannedExample {
            name: "sphere",
            source: "x1^2 + x2^2 + x3^2",
            params: &["x1", "x2", "x3"],
        },
        CannedExample {
            name: "rosenbrock",
            source: "params x1, x2\nreturn 100 * (x2 - x1^2)^2 + (1 - x1)^2",
            params: &["x1", "x2"],
        },
        CannedExample {
            name: "trig-mix",
            source: "sin(a) * cos(b) + tan(a / (1 + b^2))",
            params: &["a", "b"],
        },
        CannedExample {
            name: "gaussian",
            source: "exp(-(x - m)^2 / (2 * s^2))",
            params: &["x", "m", "s"],
        },
        CannedExample {
            name: "smooth-ramp",
            source: "params x\nif x < 0:\n  y = x^2\nelse:\n  y = x^2 + x^3\nend\nreturn y",
            params: &["x"],
        },
        CannedExample {
            name: "log-barrier",
            source: "ln(x1) + ln(x2) + sqrt(x1 * x2)",
            params: &["x1", "x2"],
        },
        CannedExample {
            name: "compound-interest",
            source: "params r\nv = 1\nrepeat 6:\n  v = v * (1 + r)\nend\nreturn v",
            params: &["r"],
        },
    ]
}
