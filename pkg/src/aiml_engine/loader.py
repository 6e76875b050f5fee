"""Parse .aiml documents into categories and merge them into a knowledge base.

Documents are an XML dialect; parsing follows the interpreter discipline of
reading each construct, checking it, and only then translating it, so every
rejection carries the file position it came from. One tolerated quirk: a root
tag written as ``<aiml ... ?>`` (processing-instruction syntax mixed into the
open tag) is repaired and flagged with a warning instead of rejected, because
knowledge bases in the wild contain it verbatim.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from xml.parsers import expat

from . import model
from .model import (
    BotProperties,
    Category,
    KnowledgeBase,
    PatternPath,
    SourceRef,
    Sequence,
    validate_category,
)
from .normalize import normalize_pattern_text
from .graphmaster import GraphNode, insert

logger = logging.getLogger(__name__)

TEMPLATE_TAGS = {"star", "srai", "random", "li", "set", "get", "think", "condition", "bot"}

_HYBRID_ROOT_RE = re.compile(r"<aiml([^<>?]*)\?>")
_ENCODING_RE = re.compile(r'encoding\s*=\s*["\']([\w.\-]+)["\']')
_WS_RUN_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class Issue:
    """One positioned warning or error (1-based line and column)."""

    file: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}: {self.message}"


@dataclass
class LoadReport:
    files_loaded: int = 0
    category_count: int = 0
    warnings: list[Issue] = field(default_factory=list)
    errors: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass
class ParsedDocument:
    categories: list[Category]
    warnings: list[Issue]
    errors: list[Issue]
    version: str | None = None
    encoding: str = "UTF-8"

    @property
    def ok(self) -> bool:
        return not self.errors


class LoadError(Exception):
    """Raised by helpers that cannot return a report; carries one."""

    def __init__(self, report: LoadReport):
        self.report = report
        lines = "\n".join(str(e) for e in report.errors)
        super().__init__(f"knowledge base failed to load:\n{lines}")


# --- low-level XML reading ----------------------------------------------------

class _Element:
    __slots__ = ("tag", "attrs", "children", "line", "col")

    def __init__(self, tag: str, attrs: dict[str, str], line: int, col: int):
        self.tag = tag
        self.attrs = attrs
        self.children: list = []  # _Element | str chunks
        self.line = line
        self.col = col


def _read_tree(text: str, source: str) -> tuple[_Element | None, list[Issue]]:
    """Parse markup into a positioned element tree; one issue per failure."""
    parser = expat.ParserCreate("utf-8")
    root: list = []
    stack: list[_Element] = []

    def start(tag: str, attrs: dict[str, str]) -> None:
        el = _Element(tag, attrs, parser.CurrentLineNumber, parser.CurrentColumnNumber + 1)
        if stack:
            stack[-1].children.append(el)
        else:
            root.append(el)
        stack.append(el)

    def end(tag: str) -> None:
        stack.pop()

    def chars(data: str) -> None:
        if stack:
            stack[-1].children.append(data)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(text.encode("utf-8"), True)
    except expat.ExpatError as exc:
        message = expat.errors.messages[exc.code]
        return None, [Issue(source, exc.lineno, exc.offset + 1, f"malformed markup: {message}")]
    return root[0] if root else None, []


def _repair_hybrid_root(text: str, source: str) -> tuple[str, list[Issue]]:
    m = _HYBRID_ROOT_RE.search(text)
    if not m:
        return text, []
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    warning = Issue(
        source, line, col,
        "root tag mixes processing-instruction syntax (\"?>\"); accepted as <aiml ...>",
    )
    repaired = text[: m.start()] + f"<aiml{m.group(1)}>" + text[m.end() :]
    return repaired, [warning]


def decode_document(data: bytes, source: str) -> tuple[str | None, list[Issue]]:
    """Decode file bytes using the declared encoding, defaulting to UTF-8."""
    head = data[:256].decode("latin-1", "replace")
    m = _ENCODING_RE.search(head)
    encoding = m.group(1) if m else "utf-8"
    try:
        return data.decode(encoding), []
    except (UnicodeDecodeError, LookupError) as exc:
        return None, [Issue(source, 1, 1, f"cannot decode document as {encoding}: {exc}")]


# --- translation to categories -------------------------------------------------

def parse_document(text: str, source: str) -> ParsedDocument:
    """Translate one document into categories, collecting positioned issues."""
    doc = ParsedDocument(categories=[], warnings=[], errors=[])
    text, warnings = _repair_hybrid_root(text, source)
    doc.warnings.extend(warnings)

    root, errors = _read_tree(text, source)
    if errors:
        doc.errors.extend(errors)
        return doc
    if root is None:
        doc.errors.append(Issue(source, 1, 1, "document is empty"))
        return doc
    if root.tag != "aiml":
        doc.errors.append(Issue(source, root.line, root.col, f"root element must be <aiml>, found <{root.tag}>"))
        return doc

    for name in root.attrs:
        if name not in ("version", "encoding"):
            doc.warnings.append(Issue(source, root.line, root.col, f"unexpected attribute {name!r} on <aiml>"))
    doc.version = root.attrs.get("version")
    if doc.version is None:
        doc.warnings.append(Issue(source, root.line, root.col, "version attribute omitted on <aiml>"))
    doc.encoding = root.attrs.get("encoding", "UTF-8")

    counter = [0]
    _collect_categories(root, None, source, doc, counter)
    if not doc.categories and not doc.errors:
        doc.errors.append(Issue(source, root.line, root.col, "at least one <category> element is required"))
    return doc


def _collect_categories(parent: _Element, topic, source: str, doc: ParsedDocument, counter: list[int]) -> None:
    scope = "<topic>" if topic is not None else "<aiml>"
    for child in parent.children:
        if isinstance(child, str):
            if child.strip():
                doc.errors.append(Issue(source, parent.line, parent.col, f"stray text under {scope}"))
            continue
        if child.tag == "category":
            counter[0] += 1
            cat = _translate_category(child, topic, source, counter[0], doc)
            if cat is not None:
                doc.categories.append(cat)
        elif child.tag == "topic" and topic is None:
            name = child.attrs.get("name")
            if name is None:
                doc.errors.append(Issue(source, child.line, child.col, "<topic> requires a name attribute"))
                continue
            topic_elements = tuple(normalize_pattern_text(name))
            if not topic_elements:
                doc.errors.append(Issue(source, child.line, child.col, "topic name must be non-empty"))
                continue
            _collect_categories(child, topic_elements, source, doc, counter)
        else:
            doc.errors.append(Issue(source, child.line, child.col, f"unexpected element <{child.tag}> under {scope}"))


def _text_content(el: _Element, source: str, doc: ParsedDocument) -> str | None:
    """Text of an element that must not contain child elements."""
    for child in el.children:
        if isinstance(child, _Element):
            doc.errors.append(Issue(source, child.line, child.col, f"<{el.tag}> must contain text only, found <{child.tag}>"))
            return None
    return "".join(el.children)


def _translate_category(el: _Element, topic, source: str, ordinal: int, doc: ParsedDocument) -> Category | None:
    elements = []
    for child in el.children:
        if isinstance(child, str):
            if child.strip():
                doc.errors.append(Issue(source, el.line, el.col, "stray text inside <category>"))
                return None
        else:
            elements.append(child)

    if not elements or elements[0].tag != "pattern":
        doc.errors.append(Issue(source, el.line, el.col, "<pattern> must be the first element of <category>"))
        return None

    expected = {"pattern": 1, "that": 0, "template": 1}
    seen: dict[str, _Element] = {}
    order = [e.tag for e in elements]
    for child in elements:
        if child.tag not in expected:
            doc.errors.append(Issue(source, child.line, child.col, f"unexpected element <{child.tag}> in <category>"))
            return None
        if child.tag in seen:
            doc.errors.append(Issue(source, child.line, child.col, f"duplicate <{child.tag}> in <category>"))
            return None
        seen[child.tag] = child
    if "template" not in seen:
        doc.errors.append(Issue(source, el.line, el.col, "<category> requires a <template>"))
        return None
    if "that" in seen and order != ["pattern", "that", "template"]:
        doc.errors.append(Issue(source, el.line, el.col, "<category> children must be pattern, that, template"))
        return None

    pattern_el = seen["pattern"]
    pattern_text = _text_content(pattern_el, source, doc)
    if pattern_text is None:
        return None
    input_elements = tuple(normalize_pattern_text(pattern_text))
    if not input_elements:
        doc.errors.append(Issue(source, pattern_el.line, pattern_el.col, "pattern must be non-empty"))
        return None

    that_elements = (model.STAR,)
    if "that" in seen:
        that_text = _text_content(seen["that"], source, doc)
        if that_text is None:
            return None
        that_elements = tuple(normalize_pattern_text(that_text))
        if not that_elements:
            doc.errors.append(Issue(source, seen["that"].line, seen["that"].col, "that pattern must be non-empty"))
            return None

    nodes = _translate_children(seen["template"], source, doc, boundary_trim=True)
    if nodes is None:
        return None
    if len(nodes) == 1:
        template = nodes[0]
    else:
        template = Sequence(tuple(nodes))

    path = PatternPath(input=input_elements, that=that_elements,
                       topic=topic if topic is not None else (model.STAR,))
    return Category(path=path, template=template, source=SourceRef(source, ordinal, el.line))


def _translate_children(el: _Element, source: str, doc: ParsedDocument, boundary_trim: bool = False):
    """Template content to a node list; None when any child fails to translate."""
    nodes: list[model.TemplateNode] = []
    buffer: list[str] = []
    failed = False

    def flush() -> None:
        if buffer:
            collapsed = _WS_RUN_RE.sub(" ", "".join(buffer))
            if collapsed:
                nodes.append(model.Text(collapsed))
            buffer.clear()

    for child in el.children:
        if isinstance(child, str):
            buffer.append(child)
            continue
        flush()
        node = _translate_template_element(child, source, doc)
        if node is None:
            failed = True
        else:
            nodes.append(node)
    flush()
    if failed:
        return None

    if boundary_trim and nodes:
        if isinstance(nodes[0], model.Text):
            trimmed = nodes[0].value.lstrip()
            nodes[0] = model.Text(trimmed)
        if isinstance(nodes[-1], model.Text):
            trimmed = nodes[-1].value.rstrip()
            nodes[-1] = model.Text(trimmed)
        nodes = [n for n in nodes if not (isinstance(n, model.Text) and not n.value)]
    return nodes


def _require_empty(el: _Element, source: str, doc: ParsedDocument) -> bool:
    for child in el.children:
        if isinstance(child, _Element) or child.strip():
            doc.errors.append(Issue(source, el.line, el.col, f"<{el.tag}> must be empty"))
            return False
    return True


def _require_name(el: _Element, source: str, doc: ParsedDocument) -> str | None:
    name = el.attrs.get("name")
    if not name:
        doc.errors.append(Issue(source, el.line, el.col, f"<{el.tag}> requires a name attribute"))
    return name


def _translate_template_element(el: _Element, source: str, doc: ParsedDocument):
    tag = el.tag
    if tag == "star":
        raw = el.attrs.get("index", "1")
        try:
            index = int(raw)
        except ValueError:
            doc.errors.append(Issue(source, el.line, el.col, f"star index must be an integer, got {raw!r}"))
            return None
        if not _require_empty(el, source, doc):
            return None
        return model.Star(index)
    if tag == "srai":
        children = _translate_children(el, source, doc)
        return None if children is None else model.Srai(tuple(children))
    if tag == "random":
        items = []
        for child in el.children:
            if isinstance(child, str):
                if child.strip():
                    doc.errors.append(Issue(source, el.line, el.col, "<random> may contain only <li> items"))
                    return None
                continue
            if child.tag != "li":
                doc.errors.append(Issue(source, child.line, child.col, f"<random> may contain only <li>, found <{child.tag}>"))
                return None
            item = _translate_children(child, source, doc)
            if item is None:
                return None
            items.append(tuple(item))
        return model.Random(tuple(items))
    if tag == "li":
        doc.errors.append(Issue(source, el.line, el.col, "<li> is only allowed inside <random>"))
        return None
    if tag == "set":
        name = _require_name(el, source, doc)
        if name is None:
            return None
        children = _translate_children(el, source, doc)
        return None if children is None else model.Set(name, tuple(children))
    if tag == "get":
        name = _require_name(el, source, doc)
        if name is None or not _require_empty(el, source, doc):
            return None
        return model.Get(name)
    if tag == "think":
        children = _translate_children(el, source, doc)
        return None if children is None else model.Think(tuple(children))
    if tag == "condition":
        name = _require_name(el, source, doc)
        value = el.attrs.get("value")
        if value is None:
            doc.errors.append(Issue(source, el.line, el.col, "<condition> requires a value attribute"))
            return None
        if name is None:
            return None
        children = _translate_children(el, source, doc)
        return None if children is None else model.Condition(name, value, tuple(children))
    if tag == "bot":
        name = _require_name(el, source, doc)
        if name is None or not _require_empty(el, source, doc):
            return None
        return model.Bot(name)
    if tag == "that":
        doc.errors.append(Issue(source, el.line, el.col, "<that> is not allowed inside <template>"))
        return None
    doc.errors.append(Issue(source, el.line, el.col, f"unknown template tag <{tag}>"))
    return None


# --- knowledge base assembly ----------------------------------------------------

def parse_properties(path: Path) -> tuple[dict[str, str], list[Issue]]:
    """Read a line-oriented ``name = value`` properties file."""
    values: dict[str, str] = {}
    issues: list[Issue] = []
    text = path.read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        name, sep, value = stripped.partition("=")
        if not sep or not name.strip():
            issues.append(Issue(str(path), lineno, 1, "ignored malformed property line (expected name = value)"))
            continue
        values[name.strip()] = value.strip()
    return values, issues


def _expand_paths(paths, report: LoadReport) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(p.rglob("*.aiml")))
        elif p.is_file():
            files.append(p)
        else:
            report.errors.append(Issue(str(p), 0, 0, "no such file or directory"))
    files.sort(key=lambda f: (f.name, str(f)))
    return files


def load_knowledge_base(paths, properties_file=None) -> tuple[KnowledgeBase | None, LoadReport]:
    """Parse every .aiml file under the given paths and build the index.

    Files load in lexicographic order regardless of argument order, so the
    same file set always produces the same knowledge base. Categories with
    identical full paths resolve last-wins with a warning. Any error means
    no knowledge base is produced.
    """
    report = LoadReport()
    files = _expand_paths(paths, report)
    version: str | None = None

    merged: dict[PatternPath, Category] = {}
    for path in files:
        source = path.name
        text, issues = decode_document(path.read_bytes(), source)
        report.errors.extend(issues)
        if text is None:
            continue
        doc = parse_document(text, source)
        report.warnings.extend(doc.warnings)
        report.errors.extend(doc.errors)
        report.files_loaded += 1
        if version is None:
            version = doc.version
        for cat in doc.categories:
            problems = validate_category(cat)
            if problems:
                for problem in problems:
                    report.errors.append(Issue(source, cat.source.line, 1, problem))
                continue
            previous = merged.get(cat.path)
            if previous is not None:
                report.warnings.append(Issue(
                    source, cat.source.line, 1,
                    f"duplicate pattern overrides category {previous.source} (last file wins)",
                ))
                logger.warning("duplicate pattern: %s overrides %s", cat.source, previous.source)
            merged[cat.path] = cat

    properties = BotProperties()
    if properties_file is not None:
        props_path = Path(properties_file)
        if props_path.is_file():
            values, issues = parse_properties(props_path)
            report.warnings.extend(issues)
            properties = BotProperties(values)
        else:
            report.warnings.append(Issue(str(props_path), 0, 0, "properties file not found; using empty properties"))

    categories = sorted(merged.values(), key=lambda c: (c.source.file, c.source.ordinal))
    report.category_count = len(categories)
    if not categories and not report.errors:
        report.errors.append(Issue("<merged>", 0, 0, "knowledge base is empty: at least one <category> is required"))
    if report.errors:
        return None, report

    root = GraphNode()
    for cat in categories:
        insert(root, cat.path, cat)
    kb = KnowledgeBase(
        categories=tuple(categories),
        index=root,
        properties=properties,
        version=version,
    )
    return kb, report
