//! JSON documents: `{"kind": ..., "name": ..., "payload": ...}`.
//!
//! Partial tables are lists of `[row, column, value]` triples. Wherever a
//! payload needs a groupoid it may be given inline or as a path, relative
//! to the document's directory, of a groupoid document. Serialization
//! always writes groupoids inline, so serialized documents are
//! self-contained and parse back equal.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use morita_core::action::GAction;
use morita_core::biaction::BiAction;
use morita_core::bibundle::{validate_bibundle, Bibundle};
use morita_core::finset::FinMap;
use morita_core::functor::InternalFunctor;
use morita_core::groupoid::Groupoid;
use morita_core::morita::InternalGroupoidInActions;
use morita_core::report::ValidationReport;
use morita_core::table::PartialTable;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("{path}: invalid {kind}: {report}")]
    Invalid {
        path: String,
        kind: &'static str,
        report: ValidationReport,
    },
    #[error("{path}: {source}")]
    Construction {
        path: String,
        source: morita_core::Error,
    },
    #[error("expected a {expected} document, found a {found} document")]
    WrongKind { expected: Kind, found: Kind },
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl DocumentError {
    /// Problems with the document's content, as opposed to reading it.
    pub fn is_content_error(&self) -> bool {
        !matches!(self, DocumentError::Io { .. })
    }

    fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError::Field {
            path: path.into(),
            message: message.into(),
        }
    }
}

type Result<T, E = DocumentError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Groupoid,
    Action,
    Functor,
    Bibundle,
    InternalGroupoid,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Groupoid,
        Kind::Action,
        Kind::Functor,
        Kind::Bibundle,
        Kind::InternalGroupoid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Groupoid => "groupoid",
            Kind::Action => "action",
            Kind::Functor => "functor",
            Kind::Bibundle => "bibundle",
            Kind::InternalGroupoid => "internal-groupoid",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A document's structure, checked for shape and index ranges but not
/// yet for the laws of its kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Groupoid(Groupoid),
    Action(GAction),
    Functor(InternalFunctor),
    Bibundle(BiAction),
    InternalGroupoid(InternalGroupoidInActions),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: String,
    pub payload: Payload,
}

impl Document {
    pub fn new(name: impl Into<String>, payload: Payload) -> Self {
        Document {
            name: name.into(),
            payload,
        }
    }

    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Groupoid(_) => Kind::Groupoid,
            Payload::Action(_) => Kind::Action,
            Payload::Functor(_) => Kind::Functor,
            Payload::Bibundle(_) => Kind::Bibundle,
            Payload::InternalGroupoid(_) => Kind::InternalGroupoid,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match &self.payload {
            Payload::Groupoid(g) => g.validate(),
            Payload::Action(a) => a.validate(),
            Payload::Functor(f) => f.validate(),
            Payload::Bibundle(b) => validate_bibundle(b),
            Payload::InternalGroupoid(k) => k.validate(),
        }
    }

    fn wrong(&self, expected: Kind) -> DocumentError {
        DocumentError::WrongKind {
            expected,
            found: self.kind(),
        }
    }

    pub fn into_groupoid(self) -> Result<Groupoid> {
        match self.payload {
            Payload::Groupoid(g) => Ok(g),
            _ => Err(self.wrong(Kind::Groupoid)),
        }
    }

    pub fn into_action(self) -> Result<GAction> {
        match self.payload {
            Payload::Action(a) => Ok(a),
            _ => Err(self.wrong(Kind::Action)),
        }
    }

    pub fn into_functor(self) -> Result<InternalFunctor> {
        match self.payload {
            Payload::Functor(f) => Ok(f),
            _ => Err(self.wrong(Kind::Functor)),
        }
    }

    pub fn into_bibundle(self) -> Result<Bibundle> {
        match self.payload {
            Payload::Bibundle(b) => Bibundle::new(b).map_err(|source| DocumentError::Construction {
                path: "payload".into(),
                source,
            }),
            _ => Err(self.wrong(Kind::Bibundle)),
        }
    }

    pub fn into_internal_groupoid(self) -> Result<InternalGroupoidInActions> {
        match self.payload {
            Payload::InternalGroupoid(k) => Ok(k),
            _ => Err(self.wrong(Kind::InternalGroupoid)),
        }
    }
}

// ----- wire format -----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: String,
    name: String,
    payload: Value,
}

type Triple = [usize; 3];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidData {
    objects: usize,
    arrows: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionData {
    groupoid: Value,
    carrier: usize,
    anchor: Vec<usize>,
    act: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorData {
    dom: Value,
    cod: Value,
    obj_map: Vec<usize>,
    arr_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BibundleData {
    left: Value,
    right: Value,
    carrier: usize,
    p: Vec<usize>,
    q: Vec<usize>,
    h_act: Vec<Triple>,
    g_act: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CarrierData {
    carrier: usize,
    anchor: Vec<usize>,
    act: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InternalGroupoidData {
    base: Value,
    objects: CarrierData,
    arrows: CarrierData,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<Triple>,
}

// ----- parsing -----

/// Parses a document, checking shapes and indices and, in referenced
/// groupoids, the groupoid laws; the laws of the document's own kind are
/// left to [`Document::validate`].
pub fn parse_unchecked(text: &str, base_dir: Option<&Path>) -> Result<Document> {
    let envelope: Envelope = from_text(text)?;
    let reader = Reader { base_dir };
    let kind = Kind::ALL
        .into_iter()
        .find(|k| k.as_str() == envelope.kind)
        .ok_or_else(|| {
            let known: Vec<&str> = Kind::ALL.iter().map(|k| k.as_str()).collect();
            DocumentError::field("kind", format!("unknown kind {:?}, expected one of {}", envelope.kind, known.join(", ")))
        })?;
    let payload = reader.payload(kind, envelope.payload)?;
    Ok(Document {
        name: envelope.name,
        payload,
    })
}

/// [`parse_unchecked`] followed by validation.
pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Document> {
    let doc = parse_unchecked(text, base_dir)?;
    let report = doc.validate();
    if report.is_empty() {
        Ok(doc)
    } else {
        Err(DocumentError::Invalid {
            path: "payload".into(),
            kind: doc.kind().as_str(),
            report,
        })
    }
}

pub fn load_unchecked(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_unchecked(&text, path.parent())
}

pub fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path.parent())
}

fn from_text<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        DocumentError::Syntax {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}

fn from_value<T: DeserializeOwned>(prefix: &str, value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}.{inner}") };
        DocumentError::field(path, e.into_inner().to_string())
    })
}

struct Reader<'a> {
    base_dir: Option<&'a Path>,
}

impl Reader<'_> {
    fn payload(&self, kind: Kind, value: Value) -> Result<Payload> {
        let at = "payload";
        Ok(match kind {
            Kind::Groupoid => Payload::Groupoid(groupoid_from(at, from_value(at, value)?)?),
            Kind::Action => {
                let data: ActionData = from_value(at, value)?;
                let g = self.groupoid_ref("payload.groupoid", data.groupoid)?;
                let carrier = CarrierData {
                    carrier: data.carrier,
                    anchor: data.anchor,
                    act: data.act,
                };
                Payload::Action(action_from(at, g, carrier)?)
            }
            Kind::Functor => {
                let data: FunctorData = from_value(at, value)?;
                let dom = self.groupoid_ref("payload.dom", data.dom)?;
                let cod = self.groupoid_ref("payload.cod", data.cod)?;
                let obj_map = map_field("payload.obj_map", data.obj_map, dom.num_objects(), cod.num_objects())?;
                let arr_map = map_field("payload.arr_map", data.arr_map, dom.num_arrows(), cod.num_arrows())?;
                Payload::Functor(InternalFunctor::from_raw(dom, cod, obj_map, arr_map).map_err(construction(at))?)
            }
            Kind::Bibundle => {
                let data: BibundleData = from_value(at, value)?;
                let h = self.groupoid_ref("payload.left", data.left)?;
                let g = self.groupoid_ref("payload.right", data.right)?;
                let n = data.carrier;
                let p = map_field("payload.p", data.p, n, h.num_objects())?;
                let q = map_field("payload.q", data.q, n, g.num_objects())?;
                let h_act = table_field("payload.h_act", data.h_act, h.num_arrows(), n)?;
                let g_act = table_field("payload.g_act", data.g_act, g.num_arrows(), n)?;
                let left = GAction::from_raw(h, p, h_act).map_err(construction(at))?;
                let right = GAction::from_raw(g, q, g_act).map_err(construction(at))?;
                Payload::Bibundle(BiAction::from_raw(left, right).map_err(construction(at))?)
            }
            Kind::InternalGroupoid => {
                let data: InternalGroupoidData = from_value(at, value)?;
                let base = self.groupoid_ref("payload.base", data.base)?;
                let objects = action_from("payload.objects", base.clone(), data.objects)?;
                let arrows = action_from("payload.arrows", base.clone(), data.arrows)?;
                let (n0, n1) = (objects.len(), arrows.len());
                Payload::InternalGroupoid(InternalGroupoidInActions {
                    src: map_field("payload.src", data.src, n1, n0)?,
                    tgt: map_field("payload.tgt", data.tgt, n1, n0)?,
                    unit: map_field("payload.unit", data.unit, n0, n1)?,
                    inv: map_field("payload.inv", data.inv, n1, n1)?,
                    mul: table_field("payload.mul", data.mul, n1, n1)?,
                    base,
                    objects,
                    arrows,
                })
            }
        })
    }

    fn groupoid_ref(&self, path: &str, value: Value) -> Result<Arc<Groupoid>> {
        let g = match value {
            Value::String(reference) => {
                let file = match self.base_dir {
                    Some(dir) => dir.join(&reference),
                    None => PathBuf::from(&reference),
                };
                let doc = load_unchecked(&file).map_err(|e| DocumentError::field(path, format!("in {reference}: {e}")))?;
                doc.into_groupoid().map_err(|e| DocumentError::field(path, format!("in {reference}: {e}")))?
            }
            other => groupoid_from(path, from_value(path, other)?)?,
        };
        let report = g.validate();
        if !report.is_empty() {
            return Err(DocumentError::Invalid {
                path: path.into(),
                kind: "groupoid",
                report,
            });
        }
        Ok(Arc::new(g))
    }
}

fn construction(path: &str) -> impl Fn(morita_core::Error) -> DocumentError + '_ {
    move |source| DocumentError::Construction {
        path: path.into(),
        source,
    }
}

fn map_field(path: &str, values: Vec<usize>, dom: usize, cod: usize) -> Result<FinMap> {
    if values.len() != dom {
        return Err(DocumentError::field(path, format!("expected {dom} entries, found {}", values.len())));
    }
    if let Some((i, v)) = values.iter().enumerate().find(|&(_, &v)| v >= cod) {
        return Err(DocumentError::field(format!("{path}[{i}]"), format!("{v} is out of range (size {cod})")));
    }
    FinMap::new(cod, values).map_err(construction(path))
}

fn table_field(path: &str, triples: Vec<Triple>, rows: usize, cols: usize) -> Result<PartialTable> {
    let mut table = PartialTable::new(rows, cols);
    let limits = [rows, cols, cols];
    for (i, t) in triples.iter().enumerate() {
        for (j, (&v, &limit)) in t.iter().zip(&limits).enumerate() {
            if v >= limit {
                return Err(DocumentError::field(format!("{path}[{i}][{j}]"), format!("{v} is out of range (size {limit})")));
            }
        }
        if table.get(t[0], t[1]).is_some() {
            return Err(DocumentError::field(format!("{path}[{i}]"), format!("second entry for ({}, {})", t[0], t[1])));
        }
        table.set(t[0], t[1], t[2]);
    }
    Ok(table)
}

fn groupoid_from(path: &str, data: GroupoidData) -> Result<Groupoid> {
    let (n, m) = (data.objects, data.arrows);
    let src = map_field(&format!("{path}.src"), data.src, m, n)?;
    let tgt = map_field(&format!("{path}.tgt"), data.tgt, m, n)?;
    let unit = map_field(&format!("{path}.unit"), data.unit, n, m)?;
    let inv = map_field(&format!("{path}.inv"), data.inv, m, m)?;
    let mul = table_field(&format!("{path}.mul"), data.mul, m, m)?;
    Groupoid::from_raw(n.into(), src, tgt, unit, inv, mul).map_err(construction(path))
}

fn action_from(path: &str, g: Arc<Groupoid>, data: CarrierData) -> Result<GAction> {
    let n = data.carrier;
    let anchor = map_field(&format!("{path}.anchor"), data.anchor, n, g.num_objects())?;
    let act = table_field(&format!("{path}.act"), data.act, g.num_arrows(), n)?;
    GAction::from_raw(g, anchor, act).map_err(construction(path))
}

// ----- serialization -----

fn triples(table: &PartialTable) -> Vec<Triple> {
    table.triples().map(|(a, b, c)| [a, b, c]).collect()
}

fn groupoid_data(g: &Groupoid) -> GroupoidData {
    GroupoidData {
        objects: g.num_objects(),
        arrows: g.num_arrows(),
        src: g.src_map().table().to_vec(),
        tgt: g.tgt_map().table().to_vec(),
        unit: g.unit_map().table().to_vec(),
        inv: g.inv_map().table().to_vec(),
        mul: triples(g.mul_table()),
    }
}

fn groupoid_value(g: &Groupoid) -> Value {
    serde_json::to_value(groupoid_data(g)).expect("plain data serializes")
}

fn carrier_data(a: &GAction) -> CarrierData {
    CarrierData {
        carrier: a.len(),
        anchor: a.anchor_map().table().to_vec(),
        act: triples(a.act_table()),
    }
}

fn payload_value(payload: &Payload) -> Value {
    let value = match payload {
        Payload::Groupoid(g) => serde_json::to_value(groupoid_data(g)),
        Payload::Action(a) => {
            let c = carrier_data(a);
            serde_json::to_value(ActionData {
                groupoid: groupoid_value(a.groupoid()),
                carrier: c.carrier,
                anchor: c.anchor,
                act: c.act,
            })
        }
        Payload::Functor(f) => serde_json::to_value(FunctorData {
            dom: groupoid_value(f.dom()),
            cod: groupoid_value(f.cod()),
            obj_map: f.obj_map().table().to_vec(),
            arr_map: f.arr_map().table().to_vec(),
        }),
        Payload::Bibundle(b) => serde_json::to_value(BibundleData {
            left: groupoid_value(b.left_groupoid()),
            right: groupoid_value(b.right_groupoid()),
            carrier: b.len(),
            p: b.left().anchor_map().table().to_vec(),
            q: b.right().anchor_map().table().to_vec(),
            h_act: triples(b.left().act_table()),
            g_act: triples(b.right().act_table()),
        }),
        Payload::InternalGroupoid(k) => serde_json::to_value(InternalGroupoidData {
            base: groupoid_value(&k.base),
            objects: carrier_data(&k.objects),
            arrows: carrier_data(&k.arrows),
            src: k.src.table().to_vec(),
            tgt: k.tgt.table().to_vec(),
            unit: k.unit.table().to_vec(),
            inv: k.inv.table().to_vec(),
            mul: triples(&k.mul),
        }),
    };
    value.expect("plain data serializes")
}

/// Pretty-printed JSON with keys in sorted order, ending in a newline.
pub fn serialize(doc: &Document) -> String {
    let envelope = Envelope {
        kind: doc.kind().as_str().to_string(),
        name: doc.name.clone(),
        payload: payload_value(&doc.payload),
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("plain data serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use morita_core::group::GroupTable;

    fn round_trip(doc: &Document) {
        let text = serialize(doc);
        assert_eq!(&parse(&text, None).unwrap(), doc);
        assert_eq!(serialize(&parse(&text, None).unwrap()), text);
    }

    #[test]
    fn round_trips() {
        let g = Arc::new(Groupoid::from_group(&GroupTable::cyclic(3)));
        round_trip(&Document::new("t2", Payload::Groupoid(Groupoid::trivial(2))));
        round_trip(&Document::new("z3", Payload::Groupoid((*g).clone())));
        round_trip(&Document::new("regular", Payload::Action(GAction::arrows_acting(g.clone()))));
        round_trip(&Document::new("id", Payload::Functor(InternalFunctor::identity(g.clone()))));
        round_trip(&Document::new("idb", Payload::Bibundle(Bibundle::identity(g.clone()).into_sides())));
        let k = InternalGroupoidInActions::trivial_on(&GAction::arrows_acting(g));
        round_trip(&Document::new("k", Payload::InternalGroupoid(k)));
    }

    #[test]
    fn out_of_range_names_the_field() {
        let text = r#"{"kind":"groupoid","name":"g","payload":{"objects":1,"arrows":1,"src":[3],"tgt":[0],"unit":[0],"inv":[0],"mul":[[0,0,0]]}}"#;
        let e = parse(text, None).unwrap_err();
        assert!(e.to_string().starts_with("payload.src[0]"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("{\"kind\": \"groupoid\",\n \"name\": 3}", None).unwrap_err();
        match e {
            DocumentError::Syntax { line, path, .. } => {
                assert_eq!(line, 2);
                assert_eq!(path, "name");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn principality_failures_are_reported() {
        let g = Arc::new(Groupoid::from_group(&GroupTable::cyclic(2)));
        let one = Arc::new(Groupoid::trivial(1));
        let sides = BiAction::from_raw(GAction::terminal(one), GAction::terminal(g)).unwrap();
        let text = serialize(&Document::new("bad", Payload::Bibundle(sides)));
        let e = parse(&text, None).unwrap_err().to_string();
        assert!(e.contains("principality") && e.contains("pair (0, 0)"), "{e}");
    }

    #[test]
    fn groupoids_by_reference() {
        let dir = tempfile::tempdir().unwrap();
        let g = Groupoid::pair(2);
        std::fs::write(dir.path().join("g.json"), serialize(&Document::new("g", Payload::Groupoid(g.clone())))).unwrap();
        let action = r#"{"kind":"action","name":"a","payload":{"groupoid":"g.json","carrier":2,"anchor":[0,1],"act":[[0,0,0],[1,1,0],[2,0,1],[3,1,1]]}}"#;
        let path = dir.path().join("a.json");
        std::fs::write(&path, action).unwrap();
        let doc = load(&path).unwrap();
        assert_eq!(doc.into_action().unwrap().groupoid(), &g);
        let missing = action.replace("g.json", "nope.json");
        std::fs::write(&path, missing).unwrap();
        assert!(load(&path).unwrap_err().to_string().starts_with("payload.groupoid"));
    }
}
