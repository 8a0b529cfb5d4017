//! FrameNet 1.7 release reader (`frame/`, `fulltext/`, `lu/`).
//!
//! Offsets in the XML are character offsets with an inclusive end; they are
//! converted to half-open spans. A label that does not fit its sentence
//! rejects the whole sentence.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use roxmltree::{Document, Node};

use super::{sort_sentences, IngestReport};
use crate::error::{Error, Result};
use crate::model::{
    AnnotatedSentence, ElementSpan, FrameAnnotation, FrameCatalog, FrameDef, Source, Span,
};

fn xml_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "xml") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn read_xml(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_xml<'a>(path: &Path, raw: &'a str) -> Result<Document<'a>> {
    Document::parse(raw).map_err(|e| Error::Xml {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn children<'a, 'input>(
    node: Node<'a, 'input>,
    name: &'static str,
) -> impl Iterator<Item = Node<'a, 'input>> {
    node.children()
        .filter(move |c| c.is_element() && c.tag_name().name() == name)
}

fn require_dir(dir: &Path) -> Result<()> {
    if dir.is_dir() {
        Ok(())
    } else {
        Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "directory not found"),
        ))
    }
}

/// Frame name, elements (core elements first, otherwise in file order) and
/// lexical units of one frame file.
pub fn parse_frame_xml(path: &Path, raw: &str) -> Result<FrameDef> {
    let doc = parse_xml(path, raw)?;
    let root = doc.root_element();
    let bad = |message: String| Error::Xml {
        path: path.to_path_buf(),
        message,
    };
    if root.tag_name().name() != "frame" {
        return Err(bad(format!("expected <frame>, found <{}>", root.tag_name().name())));
    }
    let name = root
        .attribute("name")
        .ok_or_else(|| bad("<frame> has no name".into()))?;
    let mut core = Vec::new();
    let mut other = Vec::new();
    for fe in children(root, "FE") {
        let fe_name = fe
            .attribute("name")
            .ok_or_else(|| bad("<FE> has no name".into()))?
            .to_string();
        if fe.attribute("coreType") == Some("Core") {
            core.push(fe_name);
        } else {
            other.push(fe_name);
        }
    }
    core.extend(other);
    let lus: Vec<String> = children(root, "lexUnit")
        .filter_map(|lu| lu.attribute("name").map(String::from))
        .collect();
    let frame = FrameDef::new(name, core, lus);
    frame.validate().map_err(|e| bad(e.to_string()))?;
    Ok(frame)
}

pub fn load_frame_catalog(framenet_dir: &Path) -> Result<(FrameCatalog, IngestReport)> {
    require_dir(framenet_dir)?;
    let frame_dir = framenet_dir.join("frame");
    require_dir(&frame_dir)?;
    let files = xml_files(&frame_dir)?;
    let frames: Vec<FrameDef> = files
        .par_iter()
        .map(|path| parse_frame_xml(path, &read_xml(path)?))
        .collect::<Result<_>>()?;
    let mut report = IngestReport {
        files: files.len(),
        ..Default::default()
    };
    if frames.is_empty() {
        report.warn(format!("no frame files in {}", frame_dir.display()));
    }
    let catalog = FrameCatalog::from_frames(frames).map_err(|e| Error::Xml {
        path: frame_dir,
        message: e.to_string(),
    })?;
    Ok((catalog, report))
}

struct Rejected(String);

fn label_span(label: Node, len: usize, what: &str) -> std::result::Result<Option<Span>, Rejected> {
    let (Some(start), Some(end)) = (label.attribute("start"), label.attribute("end")) else {
        return Ok(None);
    };
    let parse = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| Rejected(format!("{what} offset {v:?} is not a number")))
    };
    let (start, end) = (parse(start)?, parse(end)?);
    let span = Span::new(start, end + 1);
    span.check_bounds(len)
        .map_err(|e| Rejected(format!("{what}: {e}")))?;
    Ok(Some(span))
}

fn layer<'a, 'input>(set: Node<'a, 'input>, name: &str) -> Option<Node<'a, 'input>> {
    children(set, "layer").find(|l| {
        l.attribute("name") == Some(name) && l.attribute("rank").map_or(true, |r| r == "1")
    })
}

/// Converts one annotation set. `Ok(None)` for sets that carry no frame
/// annotation (part-of-speech layers and the like) or were dropped.
fn parse_annotation_set(
    set: Node,
    default_frame: Option<&str>,
    len: usize,
    catalog: &FrameCatalog,
    where_: &str,
    report: &mut IngestReport,
) -> std::result::Result<Option<FrameAnnotation>, Rejected> {
    let Some(target) = layer(set, "Target") else {
        return Ok(None);
    };
    let mut trigger: Option<Span> = None;
    for label in children(target, "label") {
        if let Some(span) = label_span(label, len, "target")? {
            if trigger.map_or(true, |t| span.start < t.start) {
                trigger = Some(span);
            }
        }
    }
    let Some(trigger) = trigger else {
        return Ok(None);
    };
    let Some(frame_name) = set.attribute("frameName").or(default_frame) else {
        return Ok(None);
    };

    let mut elements: Vec<ElementSpan> = Vec::new();
    let mut repeated: Vec<String> = Vec::new();
    if let Some(fe_layer) = layer(set, "FE") {
        for label in children(fe_layer, "label") {
            let Some(name) = label.attribute("name") else { continue };
            let Some(span) = label_span(label, len, "frame element")? else {
                continue;
            };
            if elements.iter().any(|e| e.element == name) {
                repeated.push(name.to_string());
            }
            elements.push(ElementSpan::new(name, span.start, span.end));
        }
    }

    let Some(frame) = catalog.get(frame_name) else {
        report.dropped_annotations += 1;
        report.warn(format!("{where_}: unknown frame {frame_name}; annotation dropped"));
        return Ok(None);
    };
    repeated.sort();
    repeated.dedup();
    for name in &repeated {
        report.warn(format!(
            "{where_}: discontinuous element {name} of {frame_name} dropped"
        ));
    }
    let (kept, dropped): (Vec<ElementSpan>, Vec<ElementSpan>) = elements
        .into_iter()
        .partition(|e| !repeated.contains(&e.element) && frame.has_element(&e.element));
    report.dropped_elements += dropped.len();
    for e in dropped.iter().filter(|e| !repeated.contains(&e.element)) {
        report.warn(format!("{where_}: {frame_name} has no element {}; dropped", e.element));
    }
    let elements = kept;
    Ok(Some(FrameAnnotation::new(frame_name, trigger, elements)))
}

fn sentence_text<'a>(sentence: Node<'a, '_>) -> Option<&'a str> {
    children(sentence, "text").next().and_then(|t| t.text())
}

/// Sentences of one fulltext document. Sentences without annotations are
/// kept; of two annotations on the same trigger offset only the first stays.
pub fn parse_fulltext_xml(
    path: &Path,
    raw: &str,
    catalog: &FrameCatalog,
    report: &mut IngestReport,
) -> Result<Vec<AnnotatedSentence>> {
    let doc = parse_xml(path, raw)?;
    let doc_id = stem(path);
    let mut out = Vec::new();
    for sentence in doc
        .root_element()
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "sentence")
    {
        let sid = sentence.attribute("ID").unwrap_or("").to_string();
        let where_ = format!("{doc_id} sentence {sid}");
        let Some(text) = sentence_text(sentence).filter(|t| !t.is_empty()) else {
            report.rejected_sentences += 1;
            report.warn(format!("{where_}: no text; rejected"));
            continue;
        };
        let len = text.chars().count();
        let mut annotations: Vec<FrameAnnotation> = Vec::new();
        let mut rejected = None;
        for set in children(sentence, "annotationSet") {
            match parse_annotation_set(set, None, len, catalog, &where_, report) {
                Ok(Some(a)) => {
                    if annotations.iter().any(|b| b.trigger.start == a.trigger.start) {
                        report.dropped_annotations += 1;
                        report.warn(format!(
                            "{where_}: second annotation ({}) on trigger offset {}; dropped",
                            a.frame, a.trigger.start
                        ));
                    } else {
                        annotations.push(a);
                    }
                }
                Ok(None) => {}
                Err(Rejected(why)) => {
                    rejected = Some(why);
                    break;
                }
            }
        }
        if let Some(why) = rejected {
            report.rejected_sentences += 1;
            report.warn(format!("{where_}: {why}; rejected"));
            continue;
        }
        report.sentences += 1;
        report.annotations += annotations.len();
        out.push(AnnotatedSentence::new(text, &doc_id, sid, Source::Fulltext, annotations));
    }
    Ok(out)
}

/// Exemplar sentences of one lexical-unit file; each must carry exactly one
/// frame annotation.
pub fn parse_lu_xml(
    path: &Path,
    raw: &str,
    catalog: &FrameCatalog,
    report: &mut IngestReport,
) -> Result<Vec<AnnotatedSentence>> {
    let doc = parse_xml(path, raw)?;
    let root = doc.root_element();
    let doc_id = stem(path);
    let frame = root.attribute("frame");
    let mut out = Vec::new();
    for sentence in root
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "sentence")
    {
        let sid = sentence.attribute("ID").unwrap_or("").to_string();
        let where_ = format!("{doc_id} sentence {sid}");
        let Some(text) = sentence_text(sentence).filter(|t| !t.is_empty()) else {
            report.rejected_sentences += 1;
            report.warn(format!("{where_}: no text; rejected"));
            continue;
        };
        let len = text.chars().count();
        let mut annotations = Vec::new();
        let mut rejected = None;
        let mut frame_sets = 0;
        for set in children(sentence, "annotationSet") {
            if layer(set, "Target").is_some_and(|t| children(t, "label").next().is_some()) {
                frame_sets += 1;
            }
            match parse_annotation_set(set, frame, len, catalog, &where_, report) {
                Ok(Some(a)) => annotations.push(a),
                Ok(None) => {}
                Err(Rejected(why)) => {
                    rejected = Some(why);
                    break;
                }
            }
        }
        let why = match rejected {
            Some(why) => Some(why),
            None if frame_sets != 1 => Some(format!(
                "exemplar has {frame_sets} frame annotations, expected exactly one"
            )),
            None if annotations.len() != 1 => Some("exemplar annotation dropped".to_string()),
            None => None,
        };
        if let Some(why) = why {
            report.rejected_sentences += 1;
            report.warn(format!("{where_}: {why}; rejected"));
            continue;
        }
        report.sentences += 1;
        report.annotations += 1;
        out.push(AnnotatedSentence::new(text, &doc_id, sid, Source::Exemplar, annotations));
    }
    Ok(out)
}

type FileParser =
    fn(&Path, &str, &FrameCatalog, &mut IngestReport) -> Result<Vec<AnnotatedSentence>>;

fn load_dir(
    dir: &Path,
    catalog: &FrameCatalog,
    parse: FileParser,
) -> Result<(Vec<AnnotatedSentence>, IngestReport)> {
    require_dir(dir)?;
    let files = xml_files(dir)?;
    let parsed: Vec<(Vec<AnnotatedSentence>, IngestReport)> = files
        .par_iter()
        .map(|path| {
            let mut report = IngestReport {
                files: 1,
                ..Default::default()
            };
            let sentences = parse(path, &read_xml(path)?, catalog, &mut report)?;
            Ok((sentences, report))
        })
        .collect::<Result<_>>()?;
    let mut all = Vec::new();
    let mut report = IngestReport::default();
    for (sentences, r) in parsed {
        all.extend(sentences);
        report.merge(r);
    }
    sort_sentences(&mut all);
    Ok((all, report))
}

pub fn load_fulltext(
    framenet_dir: &Path,
    catalog: &FrameCatalog,
) -> Result<(Vec<AnnotatedSentence>, IngestReport)> {
    load_dir(&framenet_dir.join("fulltext"), catalog, parse_fulltext_xml)
}

pub fn load_exemplars(
    framenet_dir: &Path,
    catalog: &FrameCatalog,
) -> Result<(Vec<AnnotatedSentence>, IngestReport)> {
    load_dir(&framenet_dir.join("lu"), catalog, parse_lu_xml)
}
