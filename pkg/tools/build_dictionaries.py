#!/usr/bin/env python3
"""Regenerate the large dictionary data files shipped with api_ruler.

The frequency lexicon is derived from a word-frequency census over a large
local corpus of English prose (documentation and docstrings of installed
Python packages), filtered to alphabetic tokens and ordered most-frequent
first.  The file extension list merges the platform mimetypes registry with
a curated set of formats it misses.  The CRUD allowlist is every lexicon
word that merely *contains* a CRUD verb without being one of its
inflections (e.g. "updater", "budget", "addresses").

Run from the repository root:  python tools/build_dictionaries.py
The small hand-curated lists (crud.txt, verbs.txt, noun tables, stop words)
are maintained directly in src/api_ruler/data and are not touched here.
"""

import collections
import mimetypes
import os
import re
import sys

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "api_ruler", "data")

TARGET_WORDS = 126_500
MIN_COUNT = 2

SHORT_WORDS = {
    "a", "i", "an", "as", "at", "be", "by", "do", "go", "he", "if", "in",
    "is", "it", "me", "my", "no", "of", "on", "or", "so", "to", "up", "us",
    "we", "id", "ok", "tv",
}

# Words the rule fixtures and noun tables rely on; appended at tail rank if
# the census does not already contain them.
SUPPLEMENT = """
application applications user users account accounts order orders item items
product products category categories invoice invoices payment payments
method methods address addresses avatar avatars receipt receipts manual
manuals logo logos profile profiles shopping cart carts image images report
reports photo photos server servers provider providers backup backups job
jobs session sessions customer customers activation cancellation closure
termination creation registration shipment shipments species information
updater updaters settings setting readings reading pet pets store stores
document documents collection collections restore activate cancel terminate
permit present
""".split()

CRUD_TOKENS = [
    "get", "put", "post", "delete", "create", "read", "update", "remove",
    "insert", "fetch", "retrieve", "purge", "add", "set",
]

# Inflections of a CRUD verb stay flaggable and are excluded from the
# allowlist; resource-style nouns that happen to collide are re-added.
ALLOWLIST_KEEP = {"setting", "settings", "reading", "readings", "updater", "updaters"}

EXTRA_EXTENSIONS = """
heic heif avif webp jxl yaml yml toml ini cfg conf json5 jsonl ndjson
md markdown rst adoc proto thrift graphql gql sql db sqlite sqlite3 parquet
orc feather arrow hdf5 ipynb whl egg gem jar war ear apk aab ipa deb rpm
msi dmg pkg appimage flatpak snap iso img vhd vhdx qcow2 vmdk ova ovf
ts tsx jsx vue svelte scss sass less styl coffee dart kt kts scala groovy
clj cljs edn erl ex exs hs ml mli fs fsx nim zig lua r rb go rs php pl pm
swift m mm vb cs fsproj csproj sln gradle pom lock sum mod envrc
bak tmp temp old orig swp log out err pid sock
woff woff2 eot ttc pfb pfm afm
flac alac ape opus amr m4b
mkv webm m4v mts m2ts vob ogv f4v
raw cr2 nef arw dng orf rw2 pef srw x3f
stl obj fbx gltf glb dae 3ds blend max c4d
shp shx dbf geojson gpx kml kmz gml mbtiles
cert crt pem key pub asc sig gpg p12 pfx jks keystore
""".split()


def harvest_frequency():
    roots = []
    for path in sys.path:
        if path.endswith(("dist-packages", "site-packages")) and os.path.isdir(path):
            roots.append(path)
    roots.extend(p for p in ("/usr/share/doc", "/usr/lib/python3.10") if os.path.isdir(p))
    counter = collections.Counter()
    word_re = re.compile(r"[A-Za-z]+")
    for root in roots:
        for dirpath, _dirs, files in os.walk(root):
            if "__pycache__" in dirpath or "node_modules" in dirpath:
                continue
            for fname in files:
                if not fname.endswith((".py", ".rst", ".md")):
                    continue
                try:
                    with open(os.path.join(dirpath, fname), encoding="utf-8", errors="ignore") as fh:
                        text = fh.read()
                except OSError:
                    continue
                for word in word_re.findall(text):
                    if 2 <= len(word) <= 24:
                        counter[word.lower()] += 1
    return counter


def acceptable(word):
    if not word.isascii() or not word.isalpha():
        return False
    if len(word) < 3:
        return word in SHORT_WORDS
    return True


def build_words(counter):
    ranked = sorted(
        ((count, word) for word, count in counter.items()
         if count >= MIN_COUNT and acceptable(word)),
        key=lambda pair: (-pair[0], pair[1]),
    )
    words = [word for _count, word in ranked[:TARGET_WORDS]]
    seen = set(words)
    for word in SUPPLEMENT:
        if word not in seen:
            words.append(word)
            seen.add(word)
    if len(words) < 126_000:
        raise SystemExit(f"census too small: {len(words)} words")
    return words


def build_extensions():
    mimetypes.init()
    exts = {key.lstrip(".").lower() for key in mimetypes.types_map}
    exts |= {key.lstrip(".").lower() for key in mimetypes.common_types}
    exts |= set(EXTRA_EXTENSIONS)
    exts = {e for e in exts if e and e.isalnum()}
    if len(exts) < 800:
        raise SystemExit(f"extension list too small: {len(exts)}")
    return sorted(exts)


def build_allowlist(words):
    inflections = set()
    for token in CRUD_TOKENS:
        inflections.update({
            token, token + "s", token + "es", token + "ed", token + "d",
            token + "ing", token + token[-1] + "ing", token + token[-1] + "ed",
        })
    allow = set()
    for word in words:
        if word in inflections and word not in ALLOWLIST_KEEP:
            continue
        for token in CRUD_TOKENS:
            if token in word and word != token:
                allow.add(word)
                break
    allow |= ALLOWLIST_KEEP
    allow -= {t for t in inflections if t not in ALLOWLIST_KEEP}
    if len(allow) < 800:
        raise SystemExit(f"allowlist too small: {len(allow)}")
    return sorted(allow)


def write_lines(name, lines, header=None):
    path = os.path.join(DATA_DIR, name)
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {name}: {len(lines)} entries")


def main():
    counter = harvest_frequency()
    words = build_words(counter)
    write_lines("words_by_frequency.txt", words)
    write_lines("extensions.txt", build_extensions(),
                header="known file extensions, one per line")
    write_lines("crud_allowlist.txt", build_allowlist(words),
                header="words containing a CRUD verb that are acceptable in URIs")


if __name__ == "__main__":
    main()
