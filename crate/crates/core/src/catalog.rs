//! Built-in problems, runnable by id (`fixcert certify --catalog miranda-linear`).

use crate::error::{Error, Result};
use crate::problem::{parse_problem, Problem, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    /// Command the entry is meant for.
    pub task: Task,
    /// Expected behaviour in a few words.
    pub expect: &'static str,
    pub source: &'static str,
}

impl CatalogEntry {
    pub fn problem(&self) -> Result<Problem> {
        parse_problem(self.source)
    }
}

macro_rules! entry {
    ($id:literal, $task:ident, $expect:literal, $src:literal) => {
        CatalogEntry { id: $id, task: Task::$task, expect: $expect, source: $src }
    };
}

pub const CATALOG: &[CatalogEntry] = &[
    // rectangles
    entry!("miranda-constant", Certify, "CERTIFIED, direction c",
        "dim 1\nmap g1 = 0.5\ndomain rect [0,1]\n"),
    entry!("miranda-linear", Certify, "CERTIFIED, directions (e, c), fixed point (0.5, 0.5)",
        "dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2\ndomain rect [0,1] [0,1]\n"),
    entry!("miranda-translation", Certify, "REFUTED, witnesses x = 1 (c) and x = 0 (e)",
        "dim 1\nmap g1 = x1 + 1\ndomain rect [0,1]\n"),
    // cylinders
    entry!("cylinder-constant", Certify, "CERTIFIED compressive, fixed point (0.5, 0.5)",
        "dim 2\nmap g1 = 0.5\nmap g2 = 0.5\ndomain cylinder [0,1] base [0,1]\nset form=compressive\n"),
    entry!("cylinder-equality", Certify, "CERTIFIED: T1 = t meets both base conditions with exact equality",
        "dim 2\nmap g1 = x1\nmap g2 = 0.5\ndomain cylinder [0,1] base [0,1]\nset form=compressive\n"),
    entry!("cylinder-linear", Certify, "CERTIFIED expansive, fixed point (0.5, 0.5)",
        "dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2\ndomain cylinder [0,1] base [0,1]\nset form=expansive\n"),
    entry!("cylinder-translation", Certify, "REFUTED in either form",
        "dim 2\nmap g1 = x1 + 1\nmap g2 = x2\ndomain cylinder [0,1] base [0,1]\n"),
    // cone shells
    entry!("cone-quadratic", Certify, "CERTIFIED expansive; fixed points fill the slice x1 + x2 = 1",
        "dim 2\nmap g1 = (x1 + x2)*x1\nmap g2 = (x1 + x2)*x2\ndomain coneshell l=sum a=0.5 b=2\nset form=expansive\n"),
    entry!("cone-constant", Certify, "CERTIFIED compressive, fixed point (0.75, 0.75)",
        "dim 2\nmap g1 = 0.75\nmap g2 = 0.75\ndomain coneshell l=sum a=1 b=2\nset form=compressive\n"),
    entry!("cone-identity", Certify, "INDETERMINATE: l(T(x)) = l(x) on both slices",
        "dim 2\nmap g1 = x1\nmap g2 = x2\ndomain coneshell l=sum a=1 b=2\nset max_depth=10\n"),
    entry!("cone-tripling", Certify, "REFUTED in both forms",
        "dim 2\nmap g1 = 3*x1\nmap g2 = 3*x2\ndomain coneshell l=sum a=1 b=2\n"),
    // holed discs
    entry!("holes-tanh", Certify, "CERTIFIED, index 1 - 2 = -1",
        "dim 2\nmap g1 = 2*tanh(x1)\nmap g2 = 0*x2\ndomain holedball R=4 hole (2,0,0.5) hole (-2,0,0.5)\n"),
    entry!("holes-single", Certify, "refused: a single hole gives index 0",
        "dim 2\nmap g1 = 2 + 0*x1\nmap g2 = 0*x2\ndomain holedball R=4 hole (2,0,0.5)\n"),
    entry!("holes-constant-in-hole", Certify, "REFUTED on the boundary of hole 2",
        "dim 2\nmap g1 = 2 + 0*x1\nmap g2 = 0.1 + 0*x2\ndomain holedball R=4 hole (2,0,0.5) hole (-2,0,0.5)\n"),
    // rotation controls: no certificate on any domain that avoids the centre
    entry!("annulus-rotation", Certify, "refused: annulus domains are not supported",
        "dim 2\nmap g1 = -x2\nmap g2 = x1\ndomain annulus r1=1 r2=2\n"),
    entry!("rotation-holedball", Certify, "no certificate",
        "dim 2\nmap g1 = -x2\nmap g2 = x1\ndomain holedball R=4 hole (2,0,0.5) hole (-2,0,0.5)\n"),
    entry!("rotation-coneshell", Certify, "no certificate",
        "dim 2\nmap g1 = -x2\nmap g2 = x1\ndomain coneshell l=euclid a=1 b=2\n"),
    entry!("rotation-cylinder", Certify, "no certificate",
        "dim 2\nmap g1 = -x2\nmap g2 = x1\ndomain cylinder [1,2] base [-1,1]\n"),
    entry!("rotation-rect", Certify, "no certificate",
        "dim 2\nmap g1 = -x2\nmap g2 = x1\ndomain rect [1,2] [-1,1]\n"),
    // localization
    entry!("localize-cos", Localize, "one PROVEN enclosure of 0.7390851332, width <= 1e-8",
        "dim 1\nmap g1 = cos(x1)\ndomain rect [0,1]\nset tol=1e-8\n"),
    entry!("localize-linear", Localize, "one PROVEN enclosure of (0.5, 0.5)",
        "dim 2\nmap g1 = 2*x1 - 0.5\nmap g2 = 0.25 + 0.5*x2\ndomain rect [0,1] [0,1]\nset tol=1e-8\n"),
    entry!("localize-translation", Localize, "empty list",
        "dim 1\nmap g1 = x1 + 1\ndomain rect [0,1]\n"),
    entry!("localize-shell", Localize, "level bands within 1e-6 of x1 + x2 = 1",
        "dim 2\nmap g1 = (x1 + x2)*x1\nmap g2 = (x1 + x2)*x2\ndomain coneshell l=sum a=0.5 b=2\nset tol=1e-7\nset budget=2000000\n"),
    // fixed point index
    entry!("index-constant-1d", Index, "index 1",
        "dim 1\nmap g1 = 0.5\ndomain rect [0,1]\n"),
    entry!("index-translation-1d", Index, "index 0",
        "dim 1\nmap g1 = x1 + 1\ndomain rect [0,1]\n"),
    entry!("index-reversing-1d", Index, "index -1",
        "dim 1\nmap g1 = 2*x1 - 0.5\ndomain rect [0,1]\n"),
    entry!("index-constant-inside", Index, "index 1",
        "dim 2\nmap g1 = 0.3\nmap g2 = 0.6\ndomain rect [0,1] [0,1]\n"),
    entry!("index-constant-outside", Index, "index 0",
        "dim 2\nmap g1 = 1.3\nmap g2 = 0.6\ndomain rect [0,1] [0,1]\n"),
    entry!("index-squaring", Index, "degree 2 of (x^2 - y^2, 2xy)",
        "dim 2\nmap g1 = x1 - (x1^2 - x2^2)\nmap g2 = x2 - 2*x1*x2\ndomain rect [-1,1] [-1,1]\n"),
    entry!("index-contraction", Index, "index 1",
        "dim 2\nmap g1 = 0.5*x1\nmap g2 = 0.5*x2\ndomain rect [-1,1] [-1,1]\n"),
    entry!("index-identity", Index, "error: Id - f vanishes on the boundary",
        "dim 2\nmap g1 = x1\nmap g2 = x2\ndomain rect [-1,1] [-1,1]\n"),
    entry!("index-holes", Index, "index -1 on the holed disc",
        "dim 2\nmap g1 = 2*tanh(x1)\nmap g2 = 0*x2\ndomain holedball R=4 hole (2,0,0.5) hole (-2,0,0.5)\nset max_depth=20\n"),
    // continuation
    entry!("trace-averaging", Trace, "complete chain along x = t",
        "dim 1\nparam t\nmap g1 = (x1 + t)/2\ndomain rect [-1,2]\nset t_range=[0,1]\nset grid=16\nset tol=1e-3\n"),
    entry!("trace-constant", Trace, "complete chain along x = t",
        "dim 1\nparam t\nmap g1 = t + 0*x1\ndomain rect [-1,2]\nset t_range=[0,1]\nset grid=16\nset tol=1e-3\n"),
    entry!("trace-translation", Trace, "every slab empty, incomplete at t = 0",
        "dim 1\nparam t\nmap g1 = x1 + 1 + 0*t\ndomain rect [-1,2]\nset t_range=[0,1]\nset grid=16\nset tol=1e-3\n"),
];

pub fn lookup(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog entry '{id}'")))
}
