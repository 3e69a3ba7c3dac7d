//! POM parsing: turns a `pom.xml` document into resolved coordinates,
//! packaging and the list of declared direct dependencies.
//!
//! Parent resolution is single-level and corpus-local: a missing
//! `groupId`/`version` falls back to the `<parent>` declaration, and the
//! parent document (when the supplied corpus has it) contributes only its
//! `<properties>`. `<dependencyManagement>`, profiles and BOM imports are
//! not expanded; a dependency without a version stays version-less.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{Coordinates, Packaging, Scope};

/// Parse failure for one document. Such artifacts are skipped by callers,
/// never fatal to an ingestion run.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PomError {
    #[error("CorruptPom: {source_id}: {reason}")]
    CorruptPom { source_id: String, reason: String },
}

impl PomError {
    fn new(source_id: &str, reason: impl Into<String>) -> Self {
        PomError::CorruptPom {
            source_id: source_id.to_owned(),
            reason: reason.into(),
        }
    }
}

/// A raw POM: XML text plus an identifier (path or URL) for diagnostics.
/// Well-formedness is checked at parse time, not at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PomDocument {
    source_id: String,
    xml: String,
}

impl PomDocument {
    pub fn new(source_id: impl Into<String>, xml: impl Into<String>) -> Self {
        PomDocument {
            source_id: source_id.into(),
            xml: xml.into(),
        }
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn xml(&self) -> &str {
        &self.xml
    }
}

/// One `<dependency>` declaration after interpolation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyDecl {
    pub target_group: String,
    pub target_artifact: String,
    /// Absent when the POM declares no version (managed elsewhere).
    pub target_version: Option<String>,
    pub scope: Scope,
    pub optional: bool,
    /// True when interpolation left a `${...}` placeholder in any field.
    pub unresolved_interpolation: bool,
}

/// The result of parsing one POM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedPom {
    pub coordinates: Coordinates,
    pub packaging: Packaging,
    pub dependencies: Vec<DependencyDecl>,
}

/// Corpus-local lookup for parent documents.
pub trait ParentProvider {
    fn parent_pom(&self, coordinates: &Coordinates) -> Option<PomDocument>;
}

/// Provider with no parents available; inheritance then relies on the
/// `<parent>` declaration alone.
pub struct NoParents;

impl ParentProvider for NoParents {
    fn parent_pom(&self, _coordinates: &Coordinates) -> Option<PomDocument> {
        None
    }
}

impl ParentProvider for HashMap<Coordinates, PomDocument> {
    fn parent_pom(&self, coordinates: &Coordinates) -> Option<PomDocument> {
        self.get(coordinates).cloned()
    }
}

impl<T: ParentProvider + ?Sized> ParentProvider for &T {
    fn parent_pom(&self, coordinates: &Coordinates) -> Option<PomDocument> {
        (**self).parent_pom(coordinates)
    }
}

/// Interpolation outcome: the substituted text and whether any
/// placeholder could not be resolved (left verbatim).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpolated {
    pub text: String,
    pub unresolved: bool,
}

/// Substitutes `${key}` occurrences from the property map, left to right.
/// Unknown keys stay verbatim and set the `unresolved` flag; substituted
/// values are not rescanned.
pub fn interpolate(text: &str, properties: &BTreeMap<String, String>) -> Interpolated {
    let mut out = String::with_capacity(text.len());
    let mut unresolved = false;
    let mut rest = text;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        match after.find('}') {
            Some(end) => {
                let key = &after[..end];
                match properties.get(key) {
                    Some(value) => out.push_str(value),
                    None => {
                        out.push_str(&rest[start..start + end + 3]);
                        unresolved = true;
                    }
                }
                rest = &after[end + 1..];
            }
            None => {
                // No closing brace: plain text, not a placeholder.
                out.push_str(&rest[start..]);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    Interpolated {
        text: out,
        unresolved,
    }
}

fn child_text<'a>(node: roxmltree::Node<'a, 'a>, name: &str) -> Option<String> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == name)
        .and_then(|c| c.text())
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
}

fn child_element<'a>(node: roxmltree::Node<'a, 'a>, name: &str) -> Option<roxmltree::Node<'a, 'a>> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == name)
}

/// Properties declared by one document, without inheritance.
fn own_properties(root: roxmltree::Node<'_, '_>) -> BTreeMap<String, String> {
    let mut properties = BTreeMap::new();
    if let Some(props) = child_element(root, "properties") {
        for child in props.children().filter(|c| c.is_element()) {
            let value = child.text().map(str::trim).unwrap_or_default();
            properties.insert(child.tag_name().name().to_owned(), value.to_owned());
        }
    }
    properties
}

/// Parses a POM into coordinates, packaging and dependency declarations.
///
/// `groupId` and `version` fall back to the `<parent>` declaration when
/// omitted; `packaging` defaults to `jar`; a missing `<scope>` means
/// `compile`. Anything that prevents resolving the mandatory fields
/// (malformed XML, unknown scope, unresolvable `${...}` in coordinates)
/// is reported as [`PomError::CorruptPom`].
pub fn parse_pom(doc: &PomDocument, parents: &dyn ParentProvider) -> Result<ParsedPom, PomError> {
    let source_id = doc.source_id();
    let tree = roxmltree::Document::parse(doc.xml())
        .map_err(|e| PomError::new(source_id, format!("malformed XML: {e}")))?;
    let root = tree.root_element();
    if root.tag_name().name() != "project" {
        return Err(PomError::new(source_id, "root element is not <project>"));
    }

    let parent_decl = child_element(root, "parent").map(|parent| {
        (
            child_text(parent, "groupId"),
            child_text(parent, "artifactId"),
            child_text(parent, "version"),
        )
    });

    // Effective properties: parent's (when the corpus has the parent
    // document) overridden by the child's own. Single level only.
    let mut properties = BTreeMap::new();
    if let Some((Some(pg), Some(pa), Some(pv))) = &parent_decl {
        if let Ok(parent_coords) = Coordinates::new(pg.clone(), pa.clone(), pv.clone()) {
            if let Some(parent_doc) = parents.parent_pom(&parent_coords) {
                if let Ok(parent_tree) = roxmltree::Document::parse(parent_doc.xml()) {
                    properties.extend(own_properties(parent_tree.root_element()));
                }
            }
        }
    }
    properties.extend(own_properties(root));

    let parent_group = parent_decl.as_ref().and_then(|(g, _, _)| g.clone());
    let parent_version = parent_decl.as_ref().and_then(|(_, _, v)| v.clone());

    let mandatory = |field: &str, value: Option<String>| -> Result<String, PomError> {
        let raw = value.ok_or_else(|| PomError::new(source_id, format!("missing {field}")))?;
        let resolved = interpolate(&raw, &properties);
        if resolved.unresolved || resolved.text.trim().is_empty() {
            return Err(PomError::new(
                source_id,
                format!("unresolvable {field}: {raw:?}"),
            ));
        }
        Ok(resolved.text)
    };

    let group_id = mandatory("groupId", child_text(root, "groupId").or(parent_group))?;
    let artifact_id = mandatory("artifactId", child_text(root, "artifactId"))?;
    let version = mandatory("version", child_text(root, "version").or(parent_version))?;
    let coordinates = Coordinates::new(group_id, artifact_id, version)
        .map_err(|e| PomError::new(source_id, e.to_string()))?;

    // Built-in keys resolve to the already-resolved own coordinates.
    properties.insert("project.groupId".to_owned(), coordinates.group_id().to_owned());
    properties.insert(
        "project.artifactId".to_owned(),
        coordinates.artifact_id().to_owned(),
    );
    properties.insert("project.version".to_owned(), coordinates.version().to_owned());

    let packaging = match child_text(root, "packaging") {
        Some(raw) => Packaging::parse(&interpolate(&raw, &properties).text),
        None => Packaging::Jar,
    };

    let mut dependencies = Vec::new();
    for deps in root
        .children()
        .filter(|c| c.is_element() && c.tag_name().name() == "dependencies")
    {
        for dep in deps
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "dependency")
        {
            dependencies.push(parse_dependency(source_id, dep, &properties)?);
        }
    }

    Ok(ParsedPom {
        coordinates,
        packaging,
        dependencies,
    })
}

fn parse_dependency(
    source_id: &str,
    dep: roxmltree::Node<'_, '_>,
    properties: &BTreeMap<String, String>,
) -> Result<DependencyDecl, PomError> {
    let field = |name: &str| -> Result<Interpolated, PomError> {
        let raw = child_text(dep, name)
            .ok_or_else(|| PomError::new(source_id, format!("dependency missing {name}")))?;
        Ok(interpolate(&raw, properties))
    };
    let group = field("groupId")?;
    let artifact = field("artifactId")?;
    let version = child_text(dep, "version").map(|raw| interpolate(&raw, properties));
    for part in [&group.text, &artifact.text] {
        if part.contains(':') {
            return Err(PomError::new(
                source_id,
                format!("dependency field contains ':': {part:?}"),
            ));
        }
    }
    if let Some(v) = &version {
        if v.text.contains(':') {
            return Err(PomError::new(
                source_id,
                format!("dependency version contains ':': {:?}", v.text),
            ));
        }
    }
    let scope = match child_text(dep, "scope") {
        Some(raw) => Scope::parse(&raw).map_err(|e| PomError::new(source_id, e.to_string()))?,
        None => Scope::Compile,
    };
    let optional = child_text(dep, "optional")
        .map(|t| t.eq_ignore_ascii_case("true"))
        .unwrap_or(false);
    let unresolved_interpolation = group.unresolved
        || artifact.unresolved
        || version.as_ref().is_some_and(|v| v.unresolved);
    Ok(DependencyDecl {
        target_group: group.text,
        target_artifact: artifact.text,
        target_version: version.map(|v| v.text),
        scope,
        optional,
        unresolved_interpolation,
    })
}

fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            other => out.push(other),
        }
    }
    out
}

/// Serializes a minimal POM carrying exactly the model this module
/// extracts: coordinates, packaging and scoped dependency declarations.
pub fn minimal_pom(
    coordinates: &Coordinates,
    packaging: &Packaging,
    dependencies: &[DependencyDecl],
) -> String {
    let mut xml = String::new();
    xml.push_str("<project>\n");
    xml.push_str(&format!(
        "  <groupId>{}</groupId>\n  <artifactId>{}</artifactId>\n  <version>{}</version>\n",
        escape_xml(coordinates.group_id()),
        escape_xml(coordinates.artifact_id()),
        escape_xml(coordinates.version()),
    ));
    xml.push_str(&format!(
        "  <packaging>{}</packaging>\n",
        escape_xml(packaging.csv_name())
    ));
    if !dependencies.is_empty() {
        xml.push_str("  <dependencies>\n");
        for dep in dependencies {
            xml.push_str("    <dependency>\n");
            xml.push_str(&format!(
                "      <groupId>{}</groupId>\n      <artifactId>{}</artifactId>\n",
                escape_xml(&dep.target_group),
                escape_xml(&dep.target_artifact),
            ));
            if let Some(version) = &dep.target_version {
                xml.push_str(&format!("      <version>{}</version>\n", escape_xml(version)));
            }
            xml.push_str(&format!("      <scope>{}</scope>\n", dep.scope.csv_name()));
            if dep.optional {
                xml.push_str("      <optional>true</optional>\n");
            }
            xml.push_str("    </dependency>\n");
        }
        xml.push_str("  </dependencies>\n");
    }
    xml.push_str("</project>\n");
    xml
}
