"""Token files, designator-based proper-name recognition, and unit grouping.

Input text arrives pre-segmented: one token per line as ``surface<TAB>pos``,
blank lines between sentences, ``#DOC <id>`` / ``#END`` around each document.
The POS vocabulary is open; the tags below have reserved meaning, everything
else is carried through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ParseError

# Reserved POS tags.
POS_NOUN = "noun"
POS_VERBAL_NOMINAL = "verbal-nominal"
POS_VERB = "verb"
POS_PARTICLE = "particle"
POS_PUNCT = "punct"
POS_COMPANY = "company"
POS_PERSON = "person"
POS_PLACE = "place"
POS_UNKNOWN = "unknown"
POS_OTHER = "other"

ENTITY_TAGS = frozenset({POS_COMPANY, POS_PERSON, POS_PLACE})

# Tokens a name may absorb when extending backward from a designator.
_BACKWARD_ELIGIBLE = frozenset(
    {POS_NOUN, POS_UNKNOWN, POS_COMPANY, POS_PERSON, POS_PLACE}
)
# Forward extension is deliberately narrower: bare noun/unknown only.
_FORWARD_ELIGIBLE = frozenset({POS_NOUN, POS_UNKNOWN})
# Tags that may anchor a designator match; a token exactly equal to a
# designator anchors regardless of tag.  Ordinary nouns never anchor, so
# common words that merely end in a designator char (会社, 同社, ...) are
# left alone.
_ANCHOR_ELIGIBLE = frozenset({POS_UNKNOWN, POS_COMPANY, POS_PERSON, POS_PLACE})

CONNECTOR = "・"


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    sent_index: int = 0
    tok_index: int = 0

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[tuple[Token, ...], ...]

    def tokens(self):
        for sent in self.sentences:
            yield from sent

    def surface_text(self) -> str:
        return "".join(t.surface for t in self.tokens())


@dataclass(frozen=True)
class DesignatorLexicon:
    """Designator surfaces (社, 氏, ...) mapped to an entity type."""

    entries: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for etype in self.entries.values():
            if etype not in ENTITY_TAGS:
                raise ValueError(f"unknown designator entity type: {etype}")

    def match(self, surface: str) -> str | None:
        """Entity type if ``surface`` ends with (or equals) a designator."""
        best = None
        best_len = 0
        for designator, etype in self.entries.items():
            if surface.endswith(designator) and len(designator) > best_len:
                best, best_len = etype, len(designator)
        return best


def _make_sentences(raw: list[list[tuple[str, str]]]) -> tuple[tuple[Token, ...], ...]:
    sentences = []
    for s, sent in enumerate(raw):
        sentences.append(
            tuple(Token(surface, pos, s, t) for t, (surface, pos) in enumerate(sent))
        )
    return tuple(sentences)


def _reindex(doc_id: str, sentences: list[list[Token]]) -> Document:
    out = []
    for s, sent in enumerate(sentences):
        out.append(
            tuple(replace(tok, sent_index=s, tok_index=t) for t, tok in enumerate(sent))
        )
    return Document(doc_id, tuple(out))


def parse_token_file(text: str, path: str | None = None) -> list[Document]:
    """Parse token-file content into one Document per ``#DOC`` block."""
    docs: list[Document] = []
    doc_id: str | None = None
    doc_line = 0
    current: list[list[tuple[str, str]]] = []
    sentence: list[tuple[str, str]] = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if doc_id is None:
            if not stripped:
                continue
            if not stripped.startswith("#DOC"):
                raise ParseError("expected '#DOC <id>' header", lineno, path)
            parts = stripped.split(None, 1)
            if len(parts) != 2 or not parts[1].strip():
                raise ParseError("missing document id after #DOC", lineno, path)
            doc_id = parts[1].strip()
            doc_line = lineno
            continue
        if stripped == "#END":
            if sentence:
                current.append(sentence)
                sentence = []
            if not current:
                raise ParseError(f"empty document {doc_id!r}", lineno, path)
            docs.append(Document(doc_id, _make_sentences(current)))
            doc_id = None
            current = []
            continue
        if not stripped:
            if sentence:
                current.append(sentence)
                sentence = []
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(
                f"expected 'surface<TAB>pos', got {len(fields)} field(s)", lineno, path
            )
        surface, pos = fields[0].strip(), fields[1].strip()
        if not surface or not pos:
            raise ParseError("empty surface or pos field", lineno, path)
        sentence.append((surface, pos))

    if doc_id is not None:
        raise ParseError(f"document {doc_id!r} not terminated by #END", doc_line, path)
    return docs


def parse_document(text: str, path: str | None = None) -> Document:
    """Parse content holding exactly one document."""
    docs = parse_token_file(text, path)
    if len(docs) != 1:
        raise ParseError(f"expected exactly one document, found {len(docs)}", None, path)
    return docs[0]


def serialize_token_file(docs: list[Document] | Document) -> str:
    """Normalized token-file form; inverse of :func:`parse_token_file`."""
    if isinstance(docs, Document):
        docs = [docs]
    blocks = []
    for doc in docs:
        lines = [f"#DOC {doc.doc_id}"]
        for s, sent in enumerate(doc.sentences):
            if s:
                lines.append("")
            lines.extend(f"{t.surface}\t{t.pos}" for t in sent)
        lines.append("#END")
        blocks.append("\n".join(lines))
    return "\n".join(blocks) + "\n"


def load_designator_lexicon(text: str, path: str | None = None) -> DesignatorLexicon:
    """Load ``surface<TAB>type`` lines; ``#`` starts a comment line."""
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split("\t")
        if len(fields) != 2:
            raise ParseError("expected 'surface<TAB>type'", lineno, path)
        surface, etype = fields[0].strip(), fields[1].strip()
        if etype not in ENTITY_TAGS:
            raise ParseError(f"unknown designator type {etype!r}", lineno, path)
        if surface in entries:
            raise ParseError(f"duplicate designator {surface!r}", lineno, path)
        entries[surface] = etype
    return DesignatorLexicon(entries)


def _is_numeral(tok: Token) -> bool:
    return all(c.isdigit() for c in tok.surface)


def _backward_ok(tok: Token) -> bool:
    if tok.surface == CONNECTOR:
        return True
    return tok.pos in _BACKWARD_ELIGIBLE and not _is_numeral(tok)


def _forward_ok(tok: Token) -> bool:
    return tok.pos in _FORWARD_ELIGIBLE and not _is_numeral(tok)


def recognize_names(doc: Document, lex: DesignatorLexicon) -> Document:
    """Merge designator-anchored name runs into single entity tokens.

    A token anchors a name when its surface ends with a designator and its
    tag is unknown/company/person/place, or when it exactly equals a
    designator.  The anchor absorbs the maximal run of name-like neighbors
    (backward: noun, unknown, entity tags, connector ``・``; forward: noun
    and unknown only).  Particles, verbs, other punctuation, numerals, and
    sentence boundaries stop the extension.
    """
    if not lex.entries:
        return doc
    sentences: list[list[Token]] = []
    for sent in doc.sentences:
        toks = list(sent)
        out: list[Token] = []
        i = 0
        while i < len(toks):
            tok = toks[i]
            etype = lex.match(tok.surface)
            anchored = etype is not None and (
                tok.pos in _ANCHOR_ELIGIBLE or tok.surface in lex.entries
            )
            if not anchored:
                out.append(tok)
                i += 1
                continue
            # Extend backward over tokens already emitted this sentence.
            start = len(out)
            while start > 0 and _backward_ok(out[start - 1]):
                start -= 1
            # A run may not start on the connector itself.
            while start < len(out) and out[start].surface == CONNECTOR:
                start += 1
            absorbed = out[start:]
            del out[start:]
            j = i + 1
            while j < len(toks) and _forward_ok(toks[j]):
                j += 1
            surface = "".join(t.surface for t in absorbed)
            surface += "".join(t.surface for t in toks[i:j])
            # Forward extension may leave a different designator at the end;
            # the final surface decides the type so a second pass agrees.
            final_type = lex.match(surface) or etype
            out.append(Token(surface, final_type, tok.sent_index, tok.tok_index))
            i = j
        sentences.append(out)
    return _reindex(doc.doc_id, sentences)


def group_segments(doc: Document) -> Document:
    """Join adjacent same-type entity tokens, bridging single ``・`` connectors."""
    sentences: list[list[Token]] = []
    for sent in doc.sentences:
        toks = list(sent)
        out: list[Token] = []
        i = 0
        while i < len(toks):
            tok = toks[i]
            if tok.pos not in ENTITY_TAGS:
                out.append(tok)
                i += 1
                continue
            surface = tok.surface
            j = i + 1
            while j < len(toks):
                if toks[j].pos == tok.pos:
                    surface += toks[j].surface
                    j += 1
                elif (
                    toks[j].surface == CONNECTOR
                    and j + 1 < len(toks)
                    and toks[j + 1].pos == tok.pos
                ):
                    surface += toks[j].surface + toks[j + 1].surface
                    j += 2
                else:
                    break
            out.append(Token(surface, tok.pos, tok.sent_index, tok.tok_index))
            i = j
        sentences.append(out)
    return _reindex(doc.doc_id, sentences)
