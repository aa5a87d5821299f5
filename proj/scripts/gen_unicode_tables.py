#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

Emits two tables:
  * kAlphaRanges   -- inclusive [first, last] code point ranges where
                      every code point is alphabetic (category L*).
  * kLowerRanges   -- inclusive ranges sharing a constant signed delta
                      that maps a code point to its simple lowercase form.
                      Code points whose lowercase expands to more than one
                      code point are left unmapped (kept as-is).
"""

import sys
import unicodedata

MAX_CP = 0x110000


def alpha_ranges():
    ranges = []
    start = None
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            alpha = False
        else:
            alpha = chr(cp).isalpha()
        if alpha and start is None:
            start = cp
        elif not alpha and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, MAX_CP - 1))
    return ranges


def grouped_lower():
    """Group (cp, delta) entries into (start, last, stride, delta) runs."""
    entries = []
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            entries.append((cp, ord(low) - cp))
    runs = []
    i = 0
    n = len(entries)
    while i < n:
        cp0, d0 = entries[i]
        # try stride 1 then stride 2
        best = (cp0, cp0, 1, d0, i + 1)
        for stride in (1, 2):
            j = i
            last = cp0
            while j + 1 < n and entries[j + 1][0] == last + stride and entries[j + 1][1] == d0:
                j += 1
                last = entries[j][0]
            if j > i and (j - i) > (best[4] - i - 1):
                best = (cp0, last, stride, d0, j + 1)
        runs.append(best[:4])
        i = best[4]
    return runs


def main(out_path):
    al = alpha_ranges()
    lo = grouped_lower()
    with open(out_path, "w") as f:
        f.write("// Generated by scripts/gen_unicode_tables.py -- do not edit.\n")
        f.write("// Unicode data version: %s\n" % unicodedata.unidata_version)
        f.write("namespace tables {\n\n")
        f.write("struct CpRange { char32_t first; char32_t last; };\n")
        f.write("struct LowerRun { char32_t first; char32_t last; "
                "std::uint8_t stride; std::int32_t delta; };\n\n")
        f.write("inline constexpr CpRange kAlphaRanges[] = {\n")
        for a, b in al:
            f.write("    {0x%X, 0x%X},\n" % (a, b))
        f.write("};\n\n")
        f.write("inline constexpr LowerRun kLowerRuns[] = {\n")
        for a, b, stride, delta in lo:
            f.write("    {0x%X, 0x%X, %d, %d},\n" % (a, b, stride, delta))
        f.write("};\n\n")
        f.write("} // namespace tables\n")
    sys.stderr.write("alpha ranges: %d, lower runs: %d\n" % (len(al), len(lo)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
