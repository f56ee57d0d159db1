#!/usr/bin/env python3
"""Regenerate data/cremona_le300.csv from Cremona's tables as shipped in PARI's
elldata package.

Ranks are the number of Mordell-Weil generators recorded in the tables. The
strong Weil curve of each class is the one whose period lattice ellweilcurve
reports as [1, 1]; its modular degree comes from ellmoddegree.

usage: GP_DATA_DIR=<dir containing elldata/> python3 scripts/gen_ecdb.py > data/cremona_le300.csv
"""
import datetime
import re
import sys

import cypari2

MAX_CONDUCTOR = 300

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9, silent=True)


def split_label(label):
    m = re.fullmatch(r"(\d+)([a-z]+)(\d+)", str(label))
    return int(m.group(1)), m.group(2), int(m.group(3))


def main():
    rows = []
    # ell0 holds conductors 0..999 as a single vector on one line
    data = pari("readvec(Str(default(datadir), \"/elldata/ell0\"))")[0]
    for block in data:
        n = int(block[0])
        if n > MAX_CONDUCTOR:
            continue
        classes = {}
        for entry in block[1:]:
            label, coeffs, gens = str(entry[0]), entry[1], entry[2]
            _, cls, idx = split_label(label)
            classes.setdefault(cls, []).append((idx, label, [int(c) for c in coeffs], len(gens)))
        for cls in sorted(classes, key=lambda c: (len(c), c)):
            members = sorted(classes[cls])
            curves = {tuple(c[2]): c for c in members}
            e = pari.ellinit(members[0][2])
            weil = pari.ellweilcurve(e)
            strong = None
            for curve, lat in zip(weil[0], weil[1]):
                if [int(lat[0]), int(lat[1])] == [1, 1]:
                    ai = tuple(int(x) for x in curve[:5])
                    strong = ai
            assert strong in curves, (cls, n, strong)
            degree = int(pari.ellmoddegree(pari.ellinit(list(strong))))
            ranks = {c[3] for c in members}
            assert len(ranks) == 1, (n, cls, ranks)
            for idx, label, ai, rank in members:
                is_strong = tuple(ai) == strong
                up = label.upper()
                rows.append(
                    "%s,%d,%s,%d,%d,%d,%d,%d,%d,%s,%d"
                    % (up, n, "%d%s" % (n, cls.upper()), ai[0], ai[1], ai[2], ai[3], ai[4],
                       rank, str(degree) if is_strong else "", 1 if is_strong else 0)
                )
    today = datetime.date.today().isoformat()
    print("# Elliptic curves over Q of conductor <= %d." % MAX_CONDUCTOR)
    print("# Source: J. E. Cremona, elliptic curve data (github.com/JohnCremona/ecdata),")
    print("#   via the PARI/GP elldata package (curve numbering of the 2019-08-20 update).")
    print("# Ranks: number of Mordell-Weil generators recorded in the tables.")
    print("# Modular degrees: PARI ellmoddegree on the strong Weil curve (ellweilcurve lattice [1,1]).")
    print("# Retrieved: %s" % today)
    print("# label,conductor,class_id,a1,a2,a3,a4,a6,rank,modular_degree,is_strong")
    for r in rows:
        print(r)


if __name__ == "__main__":
    main()
