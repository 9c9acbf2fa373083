import pytest

from melstruct.errors import ParseError, UnsupportedInputError
from melstruct.ingest import parse_musicxml
from melstruct.song import NoteEvent


def score(measures_xml: str, divisions: int = 4, extra_attrs: str = "") -> str:
    return f"""<score-partwise version="3.1">
  <part-list><score-part id="P1"><part-name>M</part-name></score-part></part-list>
  <part id="P1">
    <measure number="1">
      <attributes><divisions>{divisions}</divisions>{extra_attrs}</attributes>
      {measures_xml}
    </measure>
  </part>
</score-partwise>"""


def note(step: str, octave: int, duration: int, extra: str = "") -> str:
    return (
        f"<note><pitch><step>{step}</step><octave>{octave}</octave></pitch>"
        f"<duration>{duration}</duration>{extra}</note>"
    )


def test_quarter_note_c5():
    song = parse_musicxml(score(note("C", 5, 4)))
    assert song.notes == (NoteEvent(0, 4, 72),)


def test_key_signature_c_major():
    song = parse_musicxml(
        score(note("C", 5, 4), extra_attrs="<key><fifths>0</fifths><mode>major</mode></key>")
    )
    assert (song.tonic_pc, song.mode) == (0, "major")


def test_key_signature_fifths_mapping():
    for fifths, mode, tonic in [(2, "major", 2), (-1, "major", 5), (0, "minor", 9), (3, "minor", 6)]:
        song = parse_musicxml(
            score(
                note("C", 5, 4),
                extra_attrs=f"<key><fifths>{fifths}</fifths><mode>{mode}</mode></key>",
            )
        )
        assert (song.tonic_pc, song.mode) == (tonic, mode)


def test_document_without_notes():
    xml = """<score-partwise><part id="P1">
        <measure number="1"><attributes><divisions>2</divisions></attributes></measure>
        <measure number="2"/>
    </part></score-partwise>"""
    song = parse_musicxml(xml)
    assert song.notes == ()
    assert song.num_measures == 2


def test_rest_advances_cursor():
    xml = score(note("C", 5, 4) + "<note><rest/><duration>4</duration></note>" + note("D", 5, 4))
    song = parse_musicxml(xml)
    assert [(n.onset, n.pitch) for n in song.notes] == [(0, 72), (8, 74)]


def test_alter_flat_and_sharp():
    xml = score(
        note("E", 4, 4, ) .replace("</pitch>", "<alter>-1</alter></pitch>")
        + note("F", 4, 4).replace("</pitch>", "<alter>1</alter></pitch>")
    )
    song = parse_musicxml(xml)
    assert [n.pitch for n in song.notes] == [63, 66]


def test_tie_merges_notes():
    first = note("G", 4, 16, '<tie type="start"/>')  # fills measure 1
    second = note("G", 4, 8, '<tie type="stop"/>')
    xml = f"""<score-partwise><part id="P1">
      <measure number="1"><attributes><divisions>4</divisions></attributes>{first}</measure>
      <measure number="2">{second}</measure>
    </part></score-partwise>"""
    song = parse_musicxml(xml)
    assert song.notes == (NoteEvent(0, 24, 67),)


def test_non_contiguous_tie_not_merged():
    first = note("G", 4, 8, '<tie type="start"/>')  # stops before the barline
    second = note("G", 4, 8, '<tie type="stop"/>')
    xml = f"""<score-partwise><part id="P1">
      <measure number="1"><attributes><divisions>4</divisions></attributes>{first}</measure>
      <measure number="2">{second}</measure>
    </part></score-partwise>"""
    song = parse_musicxml(xml)
    assert [(n.onset, n.duration) for n in song.notes] == [(0, 8), (16, 8)]


def test_chord_keeps_top_voice():
    chord_note = note("E", 4, 4).replace("<note>", "<note><chord/>", 1)
    xml = score(note("C", 4, 4) + chord_note + note("D", 4, 4))
    song = parse_musicxml(xml)
    assert [n.pitch for n in song.notes] == [64, 62]


def test_grace_notes_skipped():
    xml = score("<note><grace/><pitch><step>B</step><octave>4</octave></pitch></note>" + note("C", 5, 4))
    song = parse_musicxml(xml)
    assert [n.pitch for n in song.notes] == [72]


def test_backup_resolved_by_monophony():
    xml = score(
        note("C", 5, 8)
        + "<backup><duration>8</duration></backup>"
        + note("E", 3, 8)
    )
    song = parse_musicxml(xml)
    assert [n.pitch for n in song.notes] == [72]


def test_non_44_rejected():
    xml = score(note("C", 5, 4), extra_attrs="<time><beats>3</beats><beat-type>4</beat-type></time>")
    with pytest.raises(UnsupportedInputError):
        parse_musicxml(xml)


def test_missing_divisions_rejected():
    xml = """<score-partwise><part id="P1"><measure number="1">
        <note><pitch><step>C</step><octave>4</octave></pitch><duration>4</duration></note>
    </measure></part></score-partwise>"""
    with pytest.raises(UnsupportedInputError):
        parse_musicxml(xml)


def test_unparseable_xml():
    with pytest.raises(ParseError):
        parse_musicxml("<score-partwise><unclosed")


def test_score_timewise_rejected():
    with pytest.raises(UnsupportedInputError):
        parse_musicxml("<score-timewise></score-timewise>")


def test_odd_divisions_stay_exact():
    # divisions=3: eighth-note triplets; 2 divisions = one sixteenth-and-a-third
    xml = score(note("C", 5, 3) + note("D", 5, 3) + note("E", 5, 3) + note("F", 5, 3), divisions=3)
    song = parse_musicxml(xml)
    assert [n.onset for n in song.notes] == [0, 4, 8, 12]
