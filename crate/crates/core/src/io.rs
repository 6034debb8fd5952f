//! JSON and CSV formats.
//!
//! Every rational is written as a string (`"7/3"`, `"-inf"`), never as a
//! JSON number. Inputs also accept decimals and scientific notation, which
//! are parsed exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::costs::{evaluate_cost, PiecewiseLinearCost};
use crate::degeneracy::{DegeneracyRecord, LexRule, LexStep};
use crate::error::{Error, Result};
use crate::homotopy::{sample, CurveSegment, CurveStats, RecordKind, SolutionCurve, Termination};
use crate::instances::{EdgeSpec, InstanceBundle};
use crate::linalg::RegionVector;
use crate::network::Network;
use crate::number::{format_decimal, format_rational, parse_rational, to_f64, ExtendedRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Directed,
    Undirected,
}

/// One-sided limits of the cost at a breakpoint, `"inf"` allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpFile {
    pub left: String,
    pub right: String,
}

/// Edge record. `breakpoints` holds one start point per piece; an extra
/// final entry is the capacity, and then `jumps` must be present and end
/// with `"right": "inf"`. `jumps` has one entry per breakpoint after the
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub breakpoints: Vec<String>,
    pub slopes: Vec<String>,
    pub offsets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jumps: Option<Vec<JumpFile>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub mode: Mode,
    #[serde(default)]
    pub constant_costs: bool,
    pub vertices: Vec<String>,
    pub source: String,
    pub sink: String,
    pub edges: Vec<EdgeFile>,
}

fn parse_list(edge: &str, what: &str, items: &[String]) -> Result<Vec<Rational>> {
    items
        .iter()
        .map(|s| parse_rational(s).map_err(|e| Error::Parse(format!("edge {edge}, {what}: {e}"))))
        .collect()
}

/// Limits at every breakpoint after the first, then at the capacity.
fn implied_jumps(cost: &PiecewiseLinearCost) -> Vec<JumpFile> {
    let mut out: Vec<JumpFile> = cost.breakpoints[1..]
        .iter()
        .map(|b| {
            let v = evaluate_cost(cost, b.expect_finite());
            JumpFile { left: v.left.to_string(), right: v.right.to_string() }
        })
        .collect();
    if let Some(cap) = &cost.capacity {
        out.push(JumpFile { left: evaluate_cost(cost, cap).left.to_string(), right: "inf".into() });
    }
    out
}

impl EdgeFile {
    pub fn from_spec(spec: &EdgeSpec) -> Self {
        let cost = &spec.cost;
        let mut breakpoints: Vec<String> = cost.breakpoints.iter().map(|b| b.to_string()).collect();
        if let Some(cap) = &cost.capacity {
            breakpoints.push(format_rational(cap));
        }
        let jumps = implied_jumps(cost);
        let needs_jumps = cost.capacity.is_some() || jumps.iter().any(|j| j.left != j.right);
        EdgeFile {
            id: spec.id.clone(),
            tail: spec.tail.clone(),
            head: spec.head.clone(),
            breakpoints,
            slopes: cost.slopes.iter().map(format_rational).collect(),
            offsets: cost.offsets.iter().map(format_rational).collect(),
            jumps: needs_jumps.then_some(jumps),
        }
    }

    pub fn to_spec(&self) -> Result<EdgeSpec> {
        let id = &self.id;
        let slopes = parse_list(id, "slopes", &self.slopes)?;
        let offsets = parse_list(id, "offsets", &self.offsets)?;
        let pieces = slopes.len();
        if pieces == 0 || offsets.len() != pieces {
            return Err(Error::Parse(format!("edge {id}: slopes and offsets must be nonempty and of equal length")));
        }
        if self.breakpoints.len() != pieces && self.breakpoints.len() != pieces + 1 {
            return Err(Error::Parse(format!("edge {id}: expected {pieces} breakpoints, or one more for a capacity")));
        }
        let first = ExtendedRational::parse(&self.breakpoints[0])?;
        if !matches!(first, ExtendedRational::NegInf) && first != ExtendedRational::zero() {
            return Err(Error::Parse(format!("edge {id}: first breakpoint must be -inf or 0")));
        }
        let mut breakpoints = vec![first];
        for b in &self.breakpoints[1..pieces] {
            breakpoints.push(ExtendedRational::Finite(parse_rational(b)?));
        }
        let capacity = match self.breakpoints.get(pieces) {
            Some(c) => Some(parse_rational(c)?),
            None => None,
        };
        let cost = PiecewiseLinearCost { breakpoints, slopes, offsets, capacity };
        cost.validate(id, true)?;
        let expected = self.breakpoints.len() - 1;
        match &self.jumps {
            Some(jumps) if jumps.len() != expected => {
                return Err(Error::Parse(format!("edge {id}: expected {expected} jump entries")));
            }
            Some(jumps) => {
                // The limits are implied by the pieces; a stated limit must agree.
                let implied = implied_jumps(&cost);
                for (k, (got, want)) in jumps.iter().zip(&implied).enumerate() {
                    let same = |a: &str, b: &str| -> Result<bool> { Ok(ExtendedRational::parse(a)? == ExtendedRational::parse(b)?) };
                    if !same(&got.left, &want.left)? || !same(&got.right, &want.right)? {
                        return Err(Error::Parse(format!(
                            "edge {id}: jump {k} is ({}, {}) but the pieces give ({}, {})",
                            got.left, got.right, want.left, want.right
                        )));
                    }
                }
            }
            None if cost.capacity.is_some() => {
                return Err(Error::Parse(format!("edge {id}: a capacity needs a jump entry with right limit inf")));
            }
            None => {}
        }
        Ok(EdgeSpec { id: id.clone(), tail: self.tail.clone(), head: self.head.clone(), cost })
    }
}

impl InstanceFile {
    pub fn from_bundle(bundle: &InstanceBundle) -> Self {
        InstanceFile {
            name: Some(bundle.name.clone()),
            note: (!bundle.note.is_empty()).then(|| bundle.note.clone()),
            mode: if bundle.directed { Mode::Directed } else { Mode::Undirected },
            constant_costs: bundle.constant_costs,
            vertices: bundle.vertices.clone(),
            source: bundle.source.clone(),
            sink: bundle.sink.clone(),
            edges: bundle.edges.iter().map(EdgeFile::from_spec).collect(),
        }
    }

    pub fn to_bundle(&self) -> Result<InstanceBundle> {
        let bundle = InstanceBundle {
            name: self.name.clone().unwrap_or_default(),
            directed: self.mode == Mode::Directed,
            constant_costs: self.constant_costs,
            vertices: self.vertices.clone(),
            source: self.source.clone(),
            sink: self.sink.clone(),
            edges: self.edges.iter().map(EdgeFile::to_spec).collect::<Result<_>>()?,
            note: self.note.clone().unwrap_or_default(),
        };
        bundle.build()?;
        Ok(bundle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindFile {
    Segment,
    Jump,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentFile {
    pub lambda_lo: String,
    pub lambda_hi: String,
    /// 0-based inverse-segment index per edge.
    pub region: Vec<usize>,
    pub flow_offset: Vec<String>,
    pub flow_slope: Vec<String>,
    pub potential_offset: Vec<String>,
    pub potential_slope: Vec<String>,
    pub kind: KindFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsFile {
    pub pivots: usize,
    pub degenerate_points: usize,
    pub jumps: usize,
    pub max_coeff_bits: u64,
    #[serde(default)]
    pub reinversions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyFile {
    pub lambda: String,
    pub rule: String,
    pub edges: Vec<String>,
    /// Regions visited while resolving, ending with the region left through.
    pub regions: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub breakpoints: Vec<String>,
    pub segments: Vec<SegmentFile>,
    pub stats: StatsFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
    /// Internal edge and vertex labels, split halves included.
    #[serde(default)]
    pub edges: Vec<String>,
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degeneracies: Vec<DegeneracyFile>,
    /// The instance the curve was computed for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Unbounded => "unbounded",
        Termination::LambdaMax => "lambda_max",
        Termination::Saturated => "saturated",
    }
}

impl CurveFile {
    pub fn from_curve(net: &Network, curve: &SolutionCurve, instance: Option<&InstanceBundle>) -> Self {
        let segments = curve
            .segments
            .iter()
            .map(|s| SegmentFile {
                lambda_lo: format_rational(&s.lambda_lo),
                lambda_hi: s.lambda_hi.to_string(),
                region: s.region.0.clone(),
                flow_offset: strings(&s.flow_offset),
                flow_slope: strings(&s.flow_slope),
                potential_offset: strings(&s.potential_offset),
                potential_slope: strings(&s.potential_slope),
                kind: match s.kind {
                    RecordKind::Segment => KindFile::Segment,
                    RecordKind::Jump => KindFile::Jump,
                },
                inverse: s.inverse.as_ref().map(|h| h.to_rows().iter().map(|r| strings(r)).collect()),
            })
            .collect();
        let degeneracies = curve.degeneracies.iter().map(|d| degeneracy_file(net, d)).collect();
        let st = &curve.stats;
        CurveFile {
            breakpoints: strings(&curve.breakpoints()),
            segments,
            stats: StatsFile {
                pivots: st.pivots,
                degenerate_points: st.degenerate_points,
                jumps: st.jumps,
                max_coeff_bits: st.max_coeff_bits,
                reinversions: st.reinversions,
            },
            termination: Some(termination_name(curve.termination).into()),
            edges: net.edge_labels().to_vec(),
            vertices: net.vertex_labels().to_vec(),
            degeneracies,
            instance: instance.map(InstanceFile::from_bundle),
        }
    }

    /// Rebuilds the curve without checking continuity; see
    /// [`check_continuity`].
    pub fn to_curve(&self) -> Result<SolutionCurve> {
        let mut segments = Vec::with_capacity(self.segments.len());
        for (i, s) in self.segments.iter().enumerate() {
            let list = |what: &str, v: &[String]| -> Result<Vec<Rational>> {
                v.iter().map(|t| parse_rational(t).map_err(|e| Error::Parse(format!("segment {i}, {what}: {e}")))).collect()
            };
            let inverse = match &s.inverse {
                Some(rows) => Some(crate::linalg::Matrix::from_rows(
                    rows.iter().map(|r| list("inverse", r)).collect::<Result<Vec<_>>>()?,
                )),
                None => None,
            };
            segments.push(CurveSegment {
                lambda_lo: parse_rational(&s.lambda_lo)?,
                lambda_hi: ExtendedRational::parse(&s.lambda_hi)?,
                region: RegionVector(s.region.clone()),
                flow_offset: list("flow_offset", &s.flow_offset)?,
                flow_slope: list("flow_slope", &s.flow_slope)?,
                potential_offset: list("potential_offset", &s.potential_offset)?,
                potential_slope: list("potential_slope", &s.potential_slope)?,
                kind: match s.kind {
                    KindFile::Segment => RecordKind::Segment,
                    KindFile::Jump => RecordKind::Jump,
                },
                inverse,
            });
        }
        let m = segments.first().map_or(0, |s| s.flow_offset.len());
        let n = segments.first().map_or(0, |s| s.potential_offset.len());
        for (i, s) in segments.iter().enumerate() {
            let sizes = [s.flow_offset.len(), s.flow_slope.len(), s.region.0.len()];
            if sizes.iter().any(|&k| k != m) || s.potential_offset.len() != n || s.potential_slope.len() != n {
                return Err(Error::Parse(format!("segment {i} has inconsistent vector lengths")));
            }
        }
        let termination = match self.termination.as_deref() {
            Some("lambda_max") => Termination::LambdaMax,
            Some("saturated") => Termination::Saturated,
            _ => Termination::Unbounded,
        };
        let st = &self.stats;
        Ok(SolutionCurve {
            segments,
            stats: CurveStats {
                pivots: st.pivots,
                degenerate_points: st.degenerate_points,
                jumps: st.jumps,
                max_coeff_bits: st.max_coeff_bits,
                reinversions: st.reinversions,
            },
            degeneracies: self.degeneracies.iter().map(|d| d.to_record(&self.edges)).collect::<Result<_>>()?,
            termination,
        })
    }
}

/// Consecutive records must join: a segment ends where the next record
/// starts, and a jump keeps demand and flow.
pub fn check_continuity(curve: &SolutionCurve) -> Result<()> {
        for (i, pair) in curve.segments.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            let ok = match a.kind {
                RecordKind::Segment => {
                    a.lambda_hi == ExtendedRational::Finite(b.lambda_lo.clone())
                        && a.flow_at(&b.lambda_lo) == b.flow_offset
                        && a.potential_at(&b.lambda_lo) == b.potential_offset
                }
                RecordKind::Jump => {
                    a.lambda_lo == b.lambda_lo && a.flow_offset == b.flow_offset && a.potential_at(&a.lambda_lo) == b.potential_offset
                }
            };
            if !ok {
                return Err(Error::Parse(format!("records {i} and {} do not join continuously", i + 1)));
            }
        }
    Ok(())
}

impl DegeneracyFile {
    /// The record as far as the file keeps it: regions survive, the
    /// lexicographic candidates of each step do not.
    pub fn to_record(&self, edge_labels: &[String]) -> Result<DegeneracyRecord> {
        let rule = match self.rule.as_str() {
            "potential" => LexRule::Potential,
            "flow" => LexRule::Flow,
            other => return Err(Error::Parse(format!("unknown degeneracy rule {other:?}"))),
        };
        let edges = self
            .edges
            .iter()
            .map(|l| edge_labels.iter().position(|e| e == l).ok_or_else(|| Error::Parse(format!("unknown edge {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let (last, rest) = self.regions.split_last().ok_or_else(|| Error::Parse("degeneracy without regions".into()))?;
        let steps = rest
            .iter()
            .map(|r| LexStep { region: RegionVector(r.clone()), direction: Vec::new(), candidates: Vec::new(), chosen: None })
            .collect();
        Ok(DegeneracyRecord {
            lambda: parse_rational(&self.lambda)?,
            rule,
            edges,
            steps,
            final_region: RegionVector(last.clone()),
        })
    }
}

fn degeneracy_file(net: &Network, d: &DegeneracyRecord) -> DegeneracyFile {
    DegeneracyFile {
        lambda: format_rational(&d.lambda),
        rule: d.rule.name().into(),
        edges: d.edges.iter().map(|&e| net.edge_label(e).to_string()).collect(),
        regions: d.region_sequence().into_iter().map(|r| r.0).collect(),
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable") + "\n"
}

pub fn read_instance(path: &Path) -> Result<InstanceBundle> {
    read_json::<InstanceFile>(path)?.to_bundle()
}

/// Writes rows with an exact and a decimal column per quantity.
fn write_exact_table(header: &[String], rows: &[Vec<ExtendedRational>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut full: Vec<String> = header.to_vec();
    full.extend(header.iter().map(|h| format!("{h}_dec")));
    w.write_record(&full).map_err(csv_error)?;
    for row in rows {
        let mut rec: Vec<String> = row.iter().map(ExtendedRational::to_string).collect();
        rec.extend(row.iter().map(|v| format_decimal(v.to_f64())));
        w.write_record(&rec).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Columns `lambda, x[e]..., pi[v]..., cost[e]...` at the requested
/// demands. Costs are omitted when `costs` is `None`.
pub fn sample_csv(
    curve: &SolutionCurve,
    edges: &[String],
    vertices: &[String],
    costs: Option<&[PiecewiseLinearCost]>,
    lambdas: &[Rational],
) -> Result<String> {
    let mut header = vec!["lambda".to_string()];
    header.extend(edges.iter().map(|e| format!("x[{e}]")));
    header.extend(vertices.iter().map(|v| format!("pi[{v}]")));
    if costs.is_some() {
        header.extend(edges.iter().map(|e| format!("cost[{e}]")));
    }
    let mut rows = Vec::with_capacity(lambdas.len());
    for lam in lambdas {
        let (x, pi) = sample(curve, lam)?;
        if x.len() != edges.len() || pi.len() != vertices.len() {
            return Err(Error::Dimension { expected: edges.len(), got: x.len() });
        }
        let mut row: Vec<ExtendedRational> = vec![lam.into()];
        row.extend(x.iter().map(ExtendedRational::from));
        row.extend(pi.iter().map(ExtendedRational::from));
        if let Some(costs) = costs {
            row.extend(costs.iter().zip(&x).map(|(c, xe)| evaluate_cost(c, xe).value));
        }
        rows.push(row);
    }
    write_exact_table(&header, &rows)
}

/// A series that [`plot_csv`] can export.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Series {
    Flow(usize),
    Potential(usize),
}

/// Parses `x:<edge>`, `pi:<vertex>`, or a bare edge or vertex label.
pub fn parse_series(text: &str, edges: &[String], vertices: &[String]) -> Result<Series> {
    let find = |list: &[String], name: &str| list.iter().position(|l| l == name);
    let unknown = || Error::Unknown(format!("series {text}"));
    if let Some(name) = text.strip_prefix("x:") {
        return find(edges, name).map(Series::Flow).ok_or_else(unknown);
    }
    if let Some(name) = text.strip_prefix("pi:") {
        return find(vertices, name).map(Series::Potential).ok_or_else(unknown);
    }
    find(edges, text)
        .map(Series::Flow)
        .or_else(|| find(vertices, text).map(Series::Potential))
        .ok_or_else(unknown)
}

/// `(λ, value)` pairs at every breakpoint of the curve for each series; a
/// jump contributes a second row at the same demand.
pub fn plot_csv(curve: &SolutionCurve, series: &[(String, Series)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "lambda", "value", "lambda_dec", "value_dec"]).map_err(csv_error)?;
    for (name, s) in series {
        let pick = |x: &[Rational], pi: &[Rational]| -> Rational {
            match s {
                Series::Flow(e) => x[*e].clone(),
                Series::Potential(v) => pi[*v].clone(),
            }
        };
        let mut points: Vec<(Rational, Rational)> = Vec::new();
        for seg in &curve.segments {
            let lo = seg.lambda_lo.clone();
            let start = pick(&seg.flow_offset, &seg.potential_offset);
            if points.last() != Some(&(lo.clone(), start.clone())) {
                points.push((lo.clone(), start));
            }
            let end = match (&seg.kind, &seg.lambda_hi) {
                (RecordKind::Jump, _) => Some((lo.clone(), pick(&seg.flow_offset, &seg.potential_at(&lo)))),
                (RecordKind::Segment, ExtendedRational::Finite(hi)) => {
                    Some((hi.clone(), pick(&seg.flow_at(hi), &seg.potential_at(hi))))
                }
                _ => None,
            };
            if let Some(p) = end {
                if points.last() != Some(&p) {
                    points.push(p);
                }
            }
        }
        for (lam, val) in points {
            w.write_record([
                name.clone(),
                format_rational(&lam),
                format_rational(&val),
                format_decimal(to_f64(&lam)),
                format_decimal(to_f64(&val)),
            ])
            .map_err(csv_error)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{nested_braess, paper_example, EXAMPLE_NAMES};
    use crate::number::{int, rat};

    #[test]
    fn instances_round_trip() {
        for name in EXAMPLE_NAMES {
            let b = paper_example(name).unwrap();
            let file = InstanceFile::from_bundle(&b);
            let text = to_json(&file);
            let back: InstanceFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_bundle().unwrap(), b, "{name}");
        }
        let braess = nested_braess(2, None).unwrap();
        assert_eq!(InstanceFile::from_bundle(&braess).to_bundle().unwrap(), braess);
    }

    #[test]
    fn capacity_is_a_final_jump() {
        let file = InstanceFile::from_bundle(&paper_example("ex_ambiguous").unwrap());
        let e2 = &file.edges[1];
        assert_eq!(e2.breakpoints.last().unwrap(), "2");
        assert_eq!(e2.jumps.as_ref().unwrap().last().unwrap().right, "inf");
        let mut broken = e2.clone();
        broken.jumps = None;
        assert!(broken.to_spec().is_err());
        let mut wrong = e2.clone();
        wrong.jumps.as_mut().unwrap().last_mut().unwrap().left = "17".into();
        assert!(wrong.to_spec().is_err());
    }

    #[test]
    fn decimals_parse_exactly() {
        let e = EdgeFile {
            id: "e".into(),
            tail: "s".into(),
            head: "t".into(),
            breakpoints: vec!["-inf".into(), "0.5".into()],
            slopes: vec!["1".into(), "2.5e-1".into()],
            offsets: vec!["0".into(), "0.375".into()],
            jumps: None,
        };
        let spec = e.to_spec().unwrap();
        assert_eq!(spec.cost.slopes[1], rat(1, 4));
        assert_eq!(spec.cost.offsets[1], rat(3, 8));
    }

    #[test]
    fn curve_round_trip_and_continuity() {
        let b = paper_example("ex_simple_undirected").unwrap();
        let (net, _, curve) = b.solve(&b.options()).unwrap();
        let file = CurveFile::from_curve(&net, &curve, Some(&b));
        assert_eq!(file.breakpoints, vec!["0", "2", "11/3", "5"]);
        let back = file.to_curve().unwrap();
        assert_eq!(back.segments, curve.segments);
        check_continuity(&back).unwrap();
        let mut bad = file.clone();
        bad.segments[1].flow_offset[0] = "7".into();
        assert!(check_continuity(&bad.to_curve().unwrap()).is_err());
    }

    #[test]
    fn plot_rows() {
        let b = paper_example("ex_simple_undirected").unwrap();
        let (net, _, curve) = b.solve(&b.options()).unwrap();
        let edges = net.edge_labels().to_vec();
        let verts = net.vertex_labels().to_vec();
        let s = parse_series("e3", &edges, &verts).unwrap();
        let csv = plot_csv(&curve, &[("e3".into(), s)]).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows[0], "e3,0,0,0,0");
        assert_eq!(rows[1], "e3,2,1,2,1");
        assert_eq!(rows[2], "e3,11/3,2,3.66666666666667,2");
        assert_eq!(rows[3], "e3,5,3,5,3");
        assert_eq!(rows.len(), 4);
        assert_eq!(plot_csv(&curve, &[]).unwrap().lines().count(), 1);
        assert!(parse_series("nope", &edges, &verts).is_err());
        let out = sample_csv(&curve, &edges, &verts, None, &[int(5)]).unwrap();
        assert!(out.lines().nth(1).unwrap().starts_with("5,2,2,3,0,"));
    }
}
