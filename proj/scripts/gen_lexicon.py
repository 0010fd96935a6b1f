#!/usr/bin/env python3
"""Regenerate assets/lexicon.tsv.

Takes the most frequent English words (wordfreq) and tags each with the
majority Penn tag from the Brill lexicon (BSD, as redistributed with
pattern3), collapsed to NOUN/VERB/ADJ/ADV/OTHER.

usage: gen_lexicon.py BRILL_LEXICON [N]
"""
import re
import sys

import wordfreq

OVERRIDES = {
    # residue of "naive" after non-ASCII stripping; keep it out of NOUN
    "nave": "ADJ",
}


def coarse(tag):
    if tag.startswith("NN"):
        return "NOUN"
    if tag.startswith("VB"):
        return "VERB"
    if tag.startswith("JJ"):
        return "ADJ"
    if tag.startswith("RB"):
        return "ADV"
    return "OTHER"


def main():
    brill = {}
    with open(sys.argv[1], encoding="utf-8", errors="ignore") as fh:
        for line in fh:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) >= 2 and parts[0] not in brill:
                brill[parts[0]] = parts[1]
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 10000
    out = {}
    for word in wordfreq.top_n_list("en", 60000):
        if len(out) >= n:
            break
        if not re.fullmatch(r"[a-z]+", word) or word not in brill:
            continue
        out[word] = coarse(brill[word])
    out.update(OVERRIDES)
    print("# word<TAB>POS; generated by scripts/gen_lexicon.py")
    for word in sorted(out):
        print(f"{word}\t{out[word]}")


if __name__ == "__main__":
    main()
