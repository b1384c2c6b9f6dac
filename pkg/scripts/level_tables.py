"""Print the per-lag tables of the Barker sequences and the length-10 optimum as CSV."""
import sys

from labskit import autocorrelation, build_level_table, parse_sequence

SEQUENCES = {
    4: "+++-",
    5: "+++-+",
    7: "+++--+-",
    10: "+++++--+-+",
    11: "+++---+--+-",
    13: "+++++--++-+-+",
}


def main(out=sys.stdout):
    for n, text in SEQUENCES.items():
        seq = parse_sequence(text)
        prof = autocorrelation(seq)
        table = build_level_table(seq)
        out.write(f"# N={n} {text} E={prof.energy} F={float(prof.merit_factor):.4f} "
                  f"d={table.total_deviation}\n")
        out.write(table.to_csv())
        out.write("\n")


if __name__ == "__main__":
    main()
