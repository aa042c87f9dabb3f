//! Subcommand implementations. Every command returns a report plus an exit
//! code: 0 pass, 1 verification failure, 2 input error.

use std::sync::Arc;

use spincut::bounds;
use spincut::cutmetrics;
use spincut::fixtures;
use spincut::flattorus::FlatTorus;
use spincut::gf2::{arf_fast, arf_naive, GfVector, QuadraticForm, SymplecticSpace};
use spincut::spin::{self, AbsenceReason, SearchBudget, SpinStructure};
use spincut::surface::{load_mesh, mesh_to_json, Mesh, SpinSpec};
use spincut::willmore;

use crate::report::{Report, Value};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

pub fn input_error(report: &mut Report, kind: &str, message: &str) -> u8 {
    report.push("error.kind", kind);
    report.push("error.message", message);
    report.push("status", "error");
    EXIT_INPUT
}

fn budget_from(budget: usize, seed: u64) -> SearchBudget {
    SearchBudget {
        k: budget.max(1),
        lagrangian_tries: budget.max(2),
        max_combinations: 1024,
        seed,
    }
}

pub struct AnalyzeOptions {
    pub path: String,
    pub spin_bits: Option<Vec<u8>>,
    pub seed: u64,
    pub subdivision: usize,
    pub budget: usize,
}

pub fn cmd_analyze(opts: &AnalyzeOptions) -> (Report, u8) {
    let mut report = Report::new("analyze", opts.seed);
    report.push("input", opts.path.as_str());

    let bytes = match std::fs::read(&opts.path) {
        Ok(b) => b,
        Err(e) => {
            let code = input_error(&mut report, "io", &e.to_string());
            return (report, code);
        }
    };
    let loaded = match load_mesh(&bytes) {
        Ok(l) => l,
        Err(e) => {
            let code = input_error(&mut report, "mesh", &e.to_string());
            return (report, code);
        }
    };
    let mesh = loaded.mesh;
    report.push("mesh.vertices", mesh.vertex_count());
    report.push("mesh.edges", mesh.edges().len());
    report.push("mesh.faces", mesh.faces().len());
    report.push("mesh.genus", mesh.genus());
    report.push("mesh.area", mesh.area());

    let basis = Arc::new(mesh.homology_basis());
    let dim = basis.cycles().len();
    let (spin, source) = match (&opts.spin_bits, &loaded.spin) {
        (Some(bits), _) => {
            match SpinStructure::from_basis_values(Arc::clone(&basis), bits) {
                Ok(s) => (s, "flag"),
                Err(e) => {
                    let code = input_error(&mut report, "spin", &e.to_string());
                    return (report, code);
                }
            }
        }
        (None, Some(spec)) => match SpinStructure::from_spec(&mesh, Arc::clone(&basis), spec) {
            Ok(s) => (s, "file"),
            Err(e) => {
                let code = input_error(&mut report, "spin", &e.to_string());
                return (report, code);
            }
        },
        (None, None) => {
            let zeros = vec![0u8; dim];
            (
                SpinStructure::from_basis_values(Arc::clone(&basis), &zeros).unwrap(),
                "default_zero",
            )
        }
    };
    report.push("spin.source", source);
    report.push("spin.q", Value::Bits(spin.form().basis_values().to_vec()));
    report.push("spin.arf", spin.arf() as i64);

    if mesh.genus() == 0 {
        report.push("bound.sphere.value", bounds::sphere_bound(mesh.area()).unwrap());
        report.push("status", "pass");
        return (report, EXIT_PASS);
    }

    if spin.arf() == -1 {
        report.push("spin_cut.found", false);
        report.push("spin_cut.reason", "arf_minus_one");
        report.push("note", "no spin-cut exists; eigenvalue bounds omitted");
        report.push("status", "pass");
        return (report, EXIT_PASS);
    }

    let budget = budget_from(opts.budget, opts.seed);
    match cutmetrics::spin_cut_diameter_lower(&mesh, &spin, &budget, opts.subdivision) {
        Err(reason) => {
            report.push("spin_cut.found", false);
            report.push("spin_cut.reason", reason.to_string());
            report.push("note", "search budget exhausted; bounds omitted");
            report.push("status", "pass");
            (report, EXIT_PASS)
        }
        Ok(est) => {
            if est.witness.verify(&mesh, &spin).is_err() {
                report.push("status", "fail");
                report.push("error.kind", "certificate");
                return (report, EXIT_VERIFICATION);
            }
            report.push("spin_cut.found", true);
            report.push("spin_cut.count", est.witness.cycles().len());
            report.push("spin_cut.total_length", est.witness.total_length(&mesh));
            report.push("delta.lower", est.best);
            report.push("delta.cuts_tried", est.cuts_tried);
            report.push("delta.subdivision", est.detail.subdivision);
            report.push(
                "delta.pair",
                format!("({}, {})", est.detail.pair.0, est.detail.pair.1),
            );

            let area = mesh.area();
            if mesh.genus() == 1 {
                let torus = bounds::torus_report(area, est.best).unwrap();
                report.push("bound.torus.k", torus.k.unwrap());
                report.push("bound.torus.value", torus.value);
                report.push("bound.torus.vacuous", torus.vacuous);
            }
            let genus = bounds::genus_report(mesh.genus(), area, est.best).unwrap();
            report.push("bound.genus.value", genus.value);
            report.push("bound.genus.vacuous", genus.vacuous);
            report.push("status", "pass");
            (report, EXIT_PASS)
        }
    }
}

pub struct FlatTorusOptions {
    pub b1: [f64; 2],
    pub b2: [f64; 2],
    pub eps: (u8, u8),
    pub seed: u64,
}

pub fn cmd_flattorus_spectrum(opts: &FlatTorusOptions, cutoff: f64) -> (Report, u8) {
    let mut report = Report::new("flattorus spectrum", opts.seed);
    push_lattice(&mut report, opts);
    let torus = match FlatTorus::new(opts.b1, opts.b2, opts.eps) {
        Ok(t) => t,
        Err(e) => {
            let code = input_error(&mut report, "lattice", &e.to_string());
            return (report, code);
        }
    };
    report.push("spin.q", Value::Bits(vec![torus.q().0, torus.q().1]));
    match torus.spectrum(cutoff) {
        Ok(slice) => {
            report.push("spectrum.cutoff", slice.cutoff);
            report.push("spectrum.count", slice.total_multiplicity());
            report.push("spectrum.values", Value::Spectrum(slice.entries.clone()));
            report.push("status", "pass");
            (report, EXIT_PASS)
        }
        Err(e) => {
            let code = input_error(&mut report, "spectrum", &e.to_string());
            (report, code)
        }
    }
}

pub fn cmd_flattorus_verify(opts: &FlatTorusOptions) -> (Report, u8) {
    let mut report = Report::new("flattorus verify", opts.seed);
    push_lattice(&mut report, opts);
    let torus = match FlatTorus::new(opts.b1, opts.b2, opts.eps) {
        Ok(t) => t,
        Err(e) => {
            let code = input_error(&mut report, "lattice", &e.to_string());
            return (report, code);
        }
    };
    if torus.is_trivial() {
        let code = input_error(
            &mut report,
            "spin",
            "the trivial structure has harmonic spinors; nothing to verify",
        );
        return (report, code);
    }
    let v = torus.verify_torus_theorem().expect("nontrivial structure verifies");
    report.push("area", v.area);
    report.push("delta", v.delta);
    report.push("lambda.min", v.lambda_min);
    report.push("bound.k", v.best_k);
    report.push("bound.value", v.best_bound);
    report.push("margin", v.margin);
    report.push("window.lo", v.window.0);
    report.push("window.hi", v.window.1);
    if v.all_pass {
        report.push("status", "pass");
        (report, EXIT_PASS)
    } else {
        report.push("status", "fail");
        (report, EXIT_VERIFICATION)
    }
}

fn push_lattice(report: &mut Report, opts: &FlatTorusOptions) {
    report.push("lattice.b1", Value::FloatList(opts.b1.to_vec()));
    report.push("lattice.b2", Value::FloatList(opts.b2.to_vec()));
    report.push("eps", Value::Bits(vec![opts.eps.0, opts.eps.1]));
}

pub enum WillmoreInput {
    File(String),
    Revolution { major: f64, minor: f64, nu: usize, nv: usize },
}

pub struct WillmoreOptions {
    pub input: WillmoreInput,
    pub spin_bits: Option<Vec<u8>>,
    pub seed: u64,
    pub subdivision: usize,
    pub budget: usize,
}

pub fn cmd_willmore(opts: &WillmoreOptions) -> (Report, u8) {
    let mut report = Report::new("willmore", opts.seed);
    let (mesh, spin): (Mesh, Option<SpinStructure>) = match &opts.input {
        WillmoreInput::File(path) => {
            report.push("input", path.as_str());
            let bytes = match std::fs::read(path) {
                Ok(b) => b,
                Err(e) => {
                    let code = input_error(&mut report, "io", &e.to_string());
                    return (report, code);
                }
            };
            let loaded = match load_mesh(&bytes) {
                Ok(l) => l,
                Err(e) => {
                    let code = input_error(&mut report, "mesh", &e.to_string());
                    return (report, code);
                }
            };
            let basis = Arc::new(loaded.mesh.homology_basis());
            let dim = basis.cycles().len();
            let spin = match (&opts.spin_bits, &loaded.spin) {
                (Some(bits), _) => {
                    match SpinStructure::from_basis_values(Arc::clone(&basis), bits) {
                        Ok(s) => Some(s),
                        Err(e) => {
                            let code = input_error(&mut report, "spin", &e.to_string());
                            return (report, code);
                        }
                    }
                }
                (None, Some(spec)) => {
                    match SpinStructure::from_spec(&loaded.mesh, Arc::clone(&basis), spec) {
                        Ok(s) => Some(s),
                        Err(e) => {
                            let code = input_error(&mut report, "spin", &e.to_string());
                            return (report, code);
                        }
                    }
                }
                (None, None) => {
                    Some(SpinStructure::from_basis_values(basis, &vec![0u8; dim]).unwrap())
                }
            };
            (loaded.mesh, spin)
        }
        WillmoreInput::Revolution { major, minor, nu, nv } => {
            report.push("input", format!("revolution({major}, {minor}, {nu}x{nv})"));
            match spin::torus_of_revolution(*major, *minor, *nu, *nv) {
                Ok((m, s)) => (m, Some(s)),
                Err(e) => {
                    let code = input_error(&mut report, "revolution", &e.to_string());
                    return (report, code);
                }
            }
        }
    };

    report.push("mesh.vertices", mesh.vertex_count());
    report.push("mesh.genus", mesh.genus());
    report.push("mesh.area", mesh.area());
    let result = match willmore::willmore_energy(&mesh) {
        Ok(r) => r,
        Err(e) => {
            let code = input_error(&mut report, "willmore", &e.to_string());
            return (report, code);
        }
    };
    report.push("willmore.energy", result.energy);
    report.push("willmore.sqrt", result.energy.sqrt());

    if mesh.genus() != 1 {
        report.push("theorem.checked", false);
        report.push("note", format!("torus bound needs genus 1, got {}", mesh.genus()));
        report.push("status", "pass");
        return (report, EXIT_PASS);
    }
    let spin = spin.expect("genus-1 inputs carry a spin structure");
    report.push("spin.arf", spin.arf() as i64);
    let budget = budget_from(opts.budget, opts.seed);
    match willmore::check_willmore_theorem(&mesh, &spin, &budget, opts.subdivision) {
        Ok(v) => {
            report.push("theorem.checked", true);
            report.push("delta.lower", v.delta);
            report.push("bound.k", v.bound_k);
            report.push("bound.value", v.bound);
            report.push("margin", v.margin);
            report.push("bound.exceeds_classical", v.exceeds_classical);
            if v.margin > 0.0 {
                report.push("status", "pass");
                (report, EXIT_PASS)
            } else {
                report.push("status", "fail");
                (report, EXIT_VERIFICATION)
            }
        }
        Err(willmore::WillmoreError::NoSpinCut(reason)) => {
            report.push("theorem.checked", false);
            report.push("note", format!("no spin-cut witnessed: {reason}"));
            let pass = reason == AbsenceReason::BudgetExhausted;
            report.push("status", if pass { "pass" } else { "fail" });
            (report, if pass { EXIT_PASS } else { EXIT_VERIFICATION })
        }
        Err(e) => {
            let code = input_error(&mut report, "willmore", &e.to_string());
            (report, code)
        }
    }
}

pub enum FixtureKind {
    GridTorus { n: usize, b1: [f64; 2], b2: [f64; 2], spin: Option<(u8, u8)> },
    ShearedTorus { n: usize, spin: Option<(u8, u8)> },
    Genus2 { n: usize },
    Icosphere { level: usize },
    Revolution { major: f64, minor: f64, nu: usize, nv: usize },
}

/// Builds a fixture and returns the mesh file contents.
pub fn fixture_bytes(kind: &FixtureKind) -> Result<String, String> {
    match kind {
        FixtureKind::GridTorus { n, b1, b2, spin } => {
            if *n < 3 {
                return Err("grid torus needs n >= 3".into());
            }
            let mesh = fixtures::grid_torus(*n, *b1, *b2);
            Ok(mesh_to_json(&mesh, torus_spin_spec(*n, *spin).as_ref()))
        }
        FixtureKind::ShearedTorus { n, spin } => {
            if *n < 3 {
                return Err("sheared torus needs n >= 3".into());
            }
            let mesh = fixtures::sheared_torus(*n);
            Ok(mesh_to_json(&mesh, torus_spin_spec(*n, *spin).as_ref()))
        }
        FixtureKind::Genus2 { n } => {
            if *n < 4 {
                return Err("genus-2 fixture needs n >= 4".into());
            }
            Ok(mesh_to_json(&fixtures::genus2_fixture(*n), None))
        }
        FixtureKind::Icosphere { level } => {
            if *level > 7 {
                return Err("icosphere level capped at 7".into());
            }
            Ok(mesh_to_json(&fixtures::icosphere(*level), None))
        }
        FixtureKind::Revolution { major, minor, nu, nv } => {
            let (mesh, _) = spin::torus_of_revolution(*major, *minor, *nu, *nv)
                .map_err(|e| e.to_string())?;
            let meridian: Vec<usize> = (0..*nv).collect();
            let longitude: Vec<usize> = (0..*nu).map(|i| i * nv).collect();
            let spec = SpinSpec {
                basis_cycles: Some(vec![meridian, longitude]),
                q_values: vec![0, 0],
            };
            Ok(mesh_to_json(&mesh, Some(&spec)))
        }
    }
}

fn torus_spin_spec(n: usize, spin: Option<(u8, u8)>) -> Option<SpinSpec> {
    spin.map(|q| SpinSpec {
        basis_cycles: Some(vec![fixtures::horizontal_loop(n, 0), fixtures::vertical_loop(n, 0)]),
        q_values: vec![q.0, q.1],
    })
}

pub fn cmd_arf(bits: &[u8], seed: u64) -> (Report, u8) {
    let mut report = Report::new("arf", seed);
    report.push("q", Value::Bits(bits.to_vec()));
    if !bits.len().is_multiple_of(2) || bits.len() > 64 {
        let code = input_error(&mut report, "form", "q needs an even number of bits (<= 64)");
        return (report, code);
    }
    let g = bits.len() / 2;
    let form = QuadraticForm::new(SymplecticSpace::standard(g), GfVector::from_slice(bits));
    report.push("genus", g);
    report.push("arf.fast", arf_fast(&form) as i64);
    match arf_naive(&form) {
        Ok(v) => report.push("arf.naive", v as i64),
        Err(_) => report.push("arf.naive", "skipped (dimension guard)"),
    }
    report.push("status", "pass");
    (report, EXIT_PASS)
}
