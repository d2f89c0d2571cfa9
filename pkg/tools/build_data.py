#!/usr/bin/env python3
"""Convert upstream Quran data packages into the corpus/metadata files under data/.

Inputs are the extracted npm packages `quran-json` (Tanzil Uthmani text,
CC BY-SA 4.0) and `quran-meta` (surah/juz/page/rub tables, MIT):

    npm pack quran-json quran-meta
    tar -xzf quran-json-*.tgz -C /tmp/qj
    tar -xzf quran-meta-*.tgz -C /tmp/qm
    python tools/build_data.py /tmp/qj/package /tmp/qm/package data/

The quran-meta lists live in a CommonJS module; we extract the JSON arrays
with a tolerant regex rather than running node.
"""

import json
import re
import sys
from pathlib import Path


def load_chapters(qj_root: Path) -> list[dict]:
    chapters = []
    for n in range(1, 115):
        with open(qj_root / "dist" / "chapters" / f"{n}.json", encoding="utf-8") as f:
            chapters.append(json.load(f))
    return chapters


def load_hafs_lists(qm_root: Path) -> dict:
    """Pull the Hafs list literals out of quran-meta's compiled CJS module."""
    src = (qm_root / "lib_cjs" / "lists" / "HafsLists.cjs").read_text(encoding="utf-8")
    names = ["HizbQuarterList", "JuzList", "PageList", "SurahList"]
    out = {}
    for name in names:
        m = re.search(rf"{name}\s*[:=]\s*(\[)", src)
        if not m:
            raise SystemExit(f"could not locate {name} in HafsLists.cjs")
        start = m.start(1)
        depth = 0
        for i in range(start, len(src)):
            if src[i] == "[":
                depth += 1
            elif src[i] == "]":
                depth -= 1
                if depth == 0:
                    literal = src[start : i + 1]
                    break
        else:
            raise SystemExit(f"unbalanced brackets for {name}")
        literal = re.sub(r",\s*([\]\}])", r"\1", literal)  # trailing commas
        literal = literal.replace("!0", "true").replace("!1", "false")
        out[name] = json.loads(literal)
    return out


def ayah_id_to_ref(ayah_id: int, surah_starts: list[int]) -> tuple[int, int]:
    """Global 1-based ayah id -> (surah_no, ayah_no_in_surah)."""
    lo = 0
    for surah_no, start in enumerate(surah_starts, 1):
        if start <= ayah_id:
            lo = surah_no
        else:
            break
    return lo, ayah_id - surah_starts[lo - 1] + 1


def main() -> None:
    if len(sys.argv) != 4:
        raise SystemExit(__doc__)
    qj_root, qm_root, out_dir = Path(sys.argv[1]), Path(sys.argv[2]), Path(sys.argv[3])
    out_dir.mkdir(parents=True, exist_ok=True)

    chapters = load_chapters(qj_root)
    lists = load_hafs_lists(qm_root)

    # SurahList rows: [first_ayah_id, ayah_count, revelation_order, ruku_count, name, is_meccan]
    # (index 0 and the trailing row are padding)
    surah_rows = lists["SurahList"][1:115]
    surah_starts = [row[0] for row in surah_rows]

    with open(out_dir / "quran-uthmani.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write("# Quran text (Uthmani script), Tanzil format: surah|ayah|text\n")
        f.write("# Source: tanzil.net via the quran-json npm package (CC BY-SA 4.0)\n")
        for ch in chapters:
            for v in ch["verses"]:
                f.write(f"{ch['id']}|{v['id']}|{v['text']}\n")

    with open(out_dir / "surahs.tsv", "w", encoding="utf-8", newline="\n") as f:
        f.write("# surah_serial_no\tname\tfull_name\trevelation_sequence_no\n")
        for serial, row in enumerate(surah_rows, 1):
            name = row[4]
            f.write(f"{serial}\t{name}\tسورة {name}\t{row[2]}\n")

    table_specs = [
        ("pages.tsv", "page_no", lists["PageList"][1:605]),
        ("juzs.tsv", "juz_no", lists["JuzList"][1:31]),
        ("rubs.tsv", "rub_no", lists["HizbQuarterList"][1:241]),
    ]
    for fname, label, starts in table_specs:
        with open(out_dir / fname, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"# {label}\tsurah_no\tayah_no\n")
            for unit_no, ayah_id in enumerate(starts, 1):
                surah_no, ayah_no = ayah_id_to_ref(ayah_id, surah_starts)
                f.write(f"{unit_no}\t{surah_no}\t{ayah_no}\n")

    print(f"wrote corpus + metadata for {len(surah_rows)} surahs to {out_dir}/")


if __name__ == "__main__":
    main()
