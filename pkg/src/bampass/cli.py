"""Command-line surface: training, recall, credentials, image conversion, benchmarks.

Exit codes:
    train           0 ok, 1 failure (parse/dimension/I-O errors)
    recall          0 converged, 1 not converged, 3 failure
    enroll          0 ok, 3 failure
    verify          0 accept, 1 reject, 2 unknown user, 3 I/O or encoding failure
    reverse         0 query ran, 3 failure
    img2vec         0 ok, 1 failure
    bench-capacity  0 ok, 1 invalid configuration
(argparse itself exits 2 on malformed flags)

Pairs file format: a header line "m n p", then p lines "A | B" where A is
m tokens and B is n tokens from {+1, -1}.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import authstore, bam, bench, core, encoders, persist


class PairsParseError(ValueError):
    """Pairs file rejected; message carries the 1-based line number."""


def parse_pairs_file(text: str) -> list[bam.PatternPair]:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise PairsParseError("line 1: expected header 'm n p'")
    header = lines[0].split()
    if len(header) != 3:
        raise PairsParseError(f"line 1: expected header 'm n p', found {lines[0]!r}")
    try:
        m, n, p = (int(x) for x in header)
    except ValueError:
        raise PairsParseError(f"line 1: non-integer header field in {lines[0]!r}") from None
    if m < 1 or n < 1 or p < 1:
        raise PairsParseError(f"line 1: m, n, p must all be positive, got {m} {n} {p}")
    pairs = []
    for i in range(p):
        lineno = i + 2
        if i + 1 >= len(lines):
            raise PairsParseError(f"line {lineno}: expected pattern pair, file ended")
        line = lines[i + 1]
        if line.count("|") != 1:
            raise PairsParseError(f"line {lineno}: expected 'A | B' with one '|'")
        a_text, b_text = line.split("|")
        try:
            a = core.parse_pm1(a_text)
            b = core.parse_pm1(b_text)
        except ValueError as exc:
            raise PairsParseError(f"line {lineno}: {exc}") from None
        if a.size != m or b.size != n:
            raise PairsParseError(
                f"line {lineno}: pattern sizes ({a.size}, {b.size}) do not match header ({m}, {n})"
            )
        pairs.append(bam.PatternPair(a, b))
    return pairs


def cmd_train(args) -> int:
    try:
        pairs = parse_pairs_file(Path(args.pairs_file).read_text())
        mem = bam.encode(pairs, scale=args.scale)
        persist.atomic_write_text(args.out, persist.dumps_model(mem))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"trained {mem.pair_count} pair(s): {mem.m}x{mem.n} weight matrix, scale {mem.scale}")
    for line in persist.matrix_lines(mem.weights):
        print(line)
    print(f"model written to {args.out}")
    return 0


def cmd_recall(args) -> int:
    try:
        mem = persist.loads_model(persist.read_text(args.model))
        probe = core.parse_pm1(args.probe)
        opts = bam.RecallOptions(max_sweeps=args.max_sweeps)
        if args.side == "a":
            res = bam.recall(mem, probe, opts)
        else:
            res = bam.recall_from_b(mem, probe, opts)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"a_final: {core.format_pm1(res.a_final)}")
    print(f"b_final: {core.format_pm1(res.b_final)}")
    print(f"sweeps: {res.sweeps}")
    print(f"converged: {'true' if res.converged else 'false'}")
    print(f"energy_trace: {' '.join(str(e) for e in res.energy_trace)}")
    return 0 if res.converged else 1


def _load_or_create_store(args) -> authstore.CredentialStore:
    path = Path(args.store)
    if path.exists():
        return authstore.load(path)
    user_cfg = encoders.TextEncodingConfig(args.bits_per_char, args.user_chars)
    pass_cfg = encoders.TextEncodingConfig(args.bits_per_char, args.pass_chars)
    return authstore.create_store(user_cfg, pass_cfg)


def cmd_enroll(args) -> int:
    try:
        store = _load_or_create_store(args)
        store = authstore.enroll(store, args.username, args.password)
        authstore.save(store, args.store)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"enrolled {args.username!r}; store holds {len(store.usernames)} user(s)")
    return 0


def cmd_verify(args) -> int:
    try:
        store = authstore.load(args.store)
        outcome = authstore.verify(store, args.username, args.password)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"decision: {outcome.decision}")
    print(f"converged: {'true' if outcome.converged else 'false'} sweeps: {outcome.sweeps}")
    return {authstore.ACCEPT: 0, authstore.REJECT: 1, authstore.UNKNOWN_USER: 2}[outcome.decision]


def cmd_reverse(args) -> int:
    try:
        store = authstore.load(args.store)
        outcome = authstore.reverse_lookup(store, args.password)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if isinstance(outcome.decoded, bytes):
        print(f"decoded_bytes: {outcome.decoded.hex()}")
    else:
        print(f"decoded: {outcome.decoded}")
    print(f"unique_enrolled_match: {'true' if outcome.unique_enrolled_match else 'false'}")
    print(f"converged: {'true' if outcome.converged else 'false'} sweeps: {outcome.sweeps}")
    return 0


def cmd_img2vec(args) -> int:
    try:
        cfg = encoders.ImageEncodingConfig(
            width=args.width, height=args.height, mode=args.mode, lum_threshold=args.threshold
        )
        data = Path(args.image).read_bytes()
        matrix = encoders.image_to_rgb_matrix(data, cfg)
        if args.rgb:
            out = "\n".join(f"{r} {g} {b}" for r, g, b in matrix.pixels.reshape(-1, 3)) + "\n"
        elif args.binary:
            bits = encoders.rgb_to_binary(matrix, cfg)
            per_row = bits.size // cfg.height
            rows = bits.reshape(cfg.height, per_row)
            out = "\n".join(" ".join(str(int(x)) for x in row) for row in rows) + "\n"
        else:
            vec = encoders.encode_image(data, cfg)
            out = core.format_pm1(vec) + "\n"
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        persist.atomic_write_text(args.out, out)
    else:
        print(out, end="")
    return 0


def cmd_bench_capacity(args) -> int:
    try:
        noise = tuple(int(x) for x in args.noise_bits.split(","))
        cfg = bench.BenchConfig(
            m=args.m,
            n=args.n,
            pairs_min=args.pairs_min,
            pairs_max=args.pairs_max,
            trials=args.trials,
            noise_bits=noise,
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    csv_text = bench.rows_to_csv(bench.run_capacity_bench(cfg))
    if args.out:
        persist.atomic_write_text(args.out, csv_text)
    else:
        print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bampass",
        description="Bidirectional associative memory: training, recall, credentials, benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="encode a pairs file into a model")
    p.add_argument("pairs_file", help="text file: header 'm n p', then p lines 'A | B'")
    p.add_argument("-o", "--out", required=True, help="model file to write")
    p.add_argument("--scale", type=int, default=1, help="positive integer weight scale")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("recall", help="run recall against a trained model")
    p.add_argument("model", help="model file from 'train'")
    p.add_argument("--probe", required=True, help="pattern, e.g. '+1 -1 +1 -1'")
    p.add_argument("--side", choices=("a", "b"), default="a", help="layer the probe feeds")
    p.add_argument("--max-sweeps", type=int, default=100)
    p.set_defaults(func=cmd_recall)

    p = sub.add_parser("enroll", help="add a username/password to a credential store")
    p.add_argument("--store", required=True)
    p.add_argument("--username", required=True)
    p.add_argument("--password", required=True)
    p.add_argument("--user-chars", type=int, default=8, help="used only when creating the store")
    p.add_argument("--pass-chars", type=int, default=8, help="used only when creating the store")
    p.add_argument("--bits-per-char", type=int, default=8, help="used only when creating the store")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("verify", help="check credentials against a store")
    p.add_argument("--store", required=True)
    p.add_argument("--username", required=True)
    p.add_argument("--password", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reverse", help="recall a username from a password")
    p.add_argument("--store", required=True)
    p.add_argument("--password", required=True)
    p.set_defaults(func=cmd_reverse)

    p = sub.add_parser("img2vec", help="convert a raster image to matrix/bit/bipolar form")
    p.add_argument("image", help="PNG/BMP/... file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--rgb", action="store_true", help="print the RGB integer matrix")
    mode.add_argument("--binary", action="store_true", help="print the binary matrix")
    mode.add_argument("--bipolar", action="store_true", help="print the bipolar vector")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--mode", choices=("rgb24", "lum1"), default="rgb24")
    p.add_argument("--threshold", type=int, default=128, help="lum1 luminance threshold")
    p.add_argument("--out", help="write to file instead of stdout")
    p.set_defaults(func=cmd_img2vec)

    p = sub.add_parser("bench-capacity", help="capacity/noise sweep, CSV output")
    p.add_argument("--m", type=int, default=64)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--pairs-min", type=int, default=1)
    p.add_argument("--pairs-max", type=int, default=16)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--noise-bits", default="0", help="comma-separated flip counts, e.g. 0,1,4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write CSV to file instead of stdout")
    p.set_defaults(func=cmd_bench_capacity)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
