import random

import pytest

from tieupkit.errors import ParseError
from tieupkit.tokens import (
    DesignatorLexicon,
    Document,
    Token,
    group_segments,
    load_designator_lexicon,
    parse_document,
    parse_token_file,
    recognize_names,
    serialize_token_file,
)

from conftest import load_doc


def doc_of(*sentences):
    built = []
    for si, pairs in enumerate(sentences):
        built.append(tuple(Token(s, p, si, ti) for ti, (s, p) in enumerate(pairs)))
    return Document("d", tuple(built))


COMPANY_LEX = DesignatorLexicon({"社": "company"})


class TestParsing:
    def test_minimal_file(self):
        doc = parse_document("#DOC d1\nX社\tcompany\nは\tparticle\n\n#END")
        assert doc.doc_id == "d1"
        assert len(doc.sentences) == 1
        assert [t.surface for t in doc.sentences[0]] == ["X社", "は"]

    def test_one_field_line_rejected(self):
        with pytest.raises(ParseError) as err:
            parse_document("#DOC d1\nX社\n#END")
        assert err.value.line == 2

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_token_file("X社\tcompany\n#END")

    def test_empty_document(self):
        with pytest.raises(ParseError):
            parse_token_file("#DOC d1\n#END")

    def test_unterminated_document(self):
        with pytest.raises(ParseError):
            parse_token_file("#DOC d1\nX社\tcompany\n")

    def test_worked_passage_has_two_sentences(self):
        doc = load_doc("tanabe_merck")
        assert len(doc.sentences) == 2

    def test_multiple_documents(self):
        docs = parse_token_file(
            "#DOC a\nx\tnoun\n#END\n#DOC b\ny\tnoun\n#END\n"
        )
        assert [d.doc_id for d in docs] == ["a", "b"]

    def test_round_trip_is_fixpoint(self):
        text = serialize_token_file(load_doc("tanabe_merck"))
        assert serialize_token_file(parse_token_file(text)) == text

    def test_random_docs_round_trip(self):
        rng = random.Random(7)
        surfaces = ["会社", "は", "。", "提携", "X", "エー・メルク"]
        tags = ["noun", "particle", "punct", "company", "unknown"]
        for _ in range(50):
            sentences = []
            for si in range(rng.randint(1, 4)):
                sentences.append(
                    [(rng.choice(surfaces), rng.choice(tags)) for _ in range(rng.randint(1, 6))]
                )
            doc = doc_of(*sentences)
            assert parse_document(serialize_token_file(doc)) == Document("d", doc.sentences)


class TestDesignatorLexicon:
    def test_load(self):
        lex = load_designator_lexicon("# comment\n社\tcompany\n氏\tperson\n")
        assert lex.entries == {"社": "company", "氏": "person"}

    def test_duplicate_rejected(self):
        with pytest.raises(ParseError):
            load_designator_lexicon("社\tcompany\n社\tperson\n")

    def test_bad_type_rejected(self):
        with pytest.raises(ParseError):
            load_designator_lexicon("社\tfirm\n")


class TestRecognizeNames:
    def test_merge_with_designator(self):
        doc = doc_of([("エー・メルク", "unknown"), ("社", "unknown")])
        out = recognize_names(doc, COMPANY_LEX)
        assert [(t.surface, t.pos) for t in out.sentences[0]] == [("エー・メルク社", "company")]

    def test_bare_designator_after_particle(self):
        doc = doc_of([("は", "particle"), ("社", "unknown")])
        out = recognize_names(doc, COMPANY_LEX)
        assert [(t.surface, t.pos) for t in out.sentences[0]] == [
            ("は", "particle"),
            ("社", "company"),
        ]

    def test_no_designator_no_change(self):
        doc = doc_of([("日本", "noun"), ("航空", "noun")])
        assert recognize_names(doc, COMPANY_LEX) == doc

    def test_common_noun_not_anchored(self):
        # 会社 and the pronouns merely end in 社; noun tokens never anchor.
        doc = doc_of([("合弁", "noun"), ("会社", "noun"), ("を", "particle"), ("同社", "noun")])
        assert recognize_names(doc, COMPANY_LEX) == doc

    def test_stops_at_punctuation_and_numerals(self):
        doc = doc_of(
            [("、", "punct"), ("8", "noun"), ("メルク", "unknown"), ("社", "unknown")]
        )
        out = recognize_names(doc, COMPANY_LEX)
        assert [t.surface for t in out.sentences[0]] == ["、", "8", "メルク社"]

    def test_forward_extension_absorbs_noun_suffix(self):
        doc = doc_of([("株式会社", "unknown"), ("日立", "noun"), ("の", "particle")])
        lex = DesignatorLexicon({"株式会社": "company"})
        out = recognize_names(doc, lex)
        assert [t.surface for t in out.sentences[0]] == ["株式会社日立", "の"]

    def test_entity_pos_is_lexicon_type(self):
        doc = doc_of([("鈴木", "person"), ("氏", "unknown")])
        lex = DesignatorLexicon({"氏": "person"})
        out = recognize_names(doc, lex)
        assert [(t.surface, t.pos) for t in out.sentences[0]] == [("鈴木氏", "person")]


class TestGroupSegments:
    def test_connector_joins_same_type(self):
        doc = doc_of([("メルセデス", "company"), ("・", "punct"), ("ベンツ", "company")])
        out = group_segments(doc)
        assert [(t.surface, t.pos) for t in out.sentences[0]] == [
            ("メルセデス・ベンツ", "company")
        ]

    def test_single_token_unchanged(self):
        doc = doc_of([("X社", "company")])
        assert group_segments(doc) == doc

    def test_particle_blocks_join(self):
        doc = doc_of([("X社", "company"), ("と", "particle"), ("Y社", "company")])
        out = group_segments(doc)
        assert [t.surface for t in out.sentences[0]] == ["X社", "と", "Y社"]

    def test_mixed_types_not_joined(self):
        doc = doc_of([("X社", "company"), ("鈴木氏", "person")])
        assert group_segments(doc) == doc


def random_docs(count, rng):
    surfaces = ["メルク", "社", "・", "は", "提携", "X", "氏", "8", "鈴木"]
    tags = ["noun", "unknown", "particle", "punct", "company", "person", "verb", "other"]
    for _ in range(count):
        sentences = []
        for _ in range(rng.randint(1, 3)):
            sentences.append(
                [(rng.choice(surfaces), rng.choice(tags)) for _ in range(rng.randint(1, 8))]
            )
        yield doc_of(*sentences)


class TestPipelineInvariants:
    def test_concatenation_preserved(self):
        rng = random.Random(11)
        lex = DesignatorLexicon({"社": "company", "氏": "person"})
        for doc in random_docs(200, rng):
            out = group_segments(recognize_names(doc, lex))
            assert out.surface_text() == doc.surface_text()

    def test_idempotence(self):
        rng = random.Random(13)
        lex = DesignatorLexicon({"社": "company", "氏": "person"})
        for doc in random_docs(200, rng):
            once = recognize_names(doc, lex)
            assert recognize_names(once, lex) == once
            grouped = group_segments(once)
            assert group_segments(grouped) == grouped

    def test_merged_tokens_carry_entity_pos(self):
        rng = random.Random(17)
        lex = DesignatorLexicon({"社": "company", "氏": "person"})
        for doc in random_docs(100, rng):
            out = recognize_names(doc, lex)
            original = {(t.surface, t.pos) for t in doc.tokens()}
            for tok in out.tokens():
                if (tok.surface, tok.pos) not in original:
                    assert tok.pos in {"company", "person", "place"}
