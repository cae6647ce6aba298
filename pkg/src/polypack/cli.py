"""Command-line interface: ``polypack <subcommand> ...``.

Exit status: 0 success, 1 usage error, 2 corrupt or invalid input,
3 I/O failure, 4 external filter failure.
"""

import argparse
import io
import sys

import numpy as np

from . import bench
from .blocks import BlockPlan, CodecPolicy
from .container import container_info, decode_container, encode_container, post_stage
from .errors import PolypackError, PostStageFailed
from .synth import DistributionSpec, generate, read_raw, write_raw

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO, EXIT_FILTER = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _write_text(path, render):
    buf = io.StringIO()
    render(buf)
    _write(path, buf.getvalue().encode())


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _shape(text):
    try:
        rows, cols = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROWSxCOLS, got {text!r}") from None
    if rows < 1 or cols < 1:
        raise argparse.ArgumentTypeError("matrix dimensions must be positive")
    return rows, cols


def _block_range(text):
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected J..K, got {text!r}") from None
    if not 0 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"invalid block range {text!r}")
    return lo, hi


def _add_distribution(p, signal=True):
    p.add_argument("--mu", type=float, default=3000.0)
    p.add_argument("--sigma", type=float, default=500.0)
    p.add_argument("--low", type=int, default=2000, help="uniform signal lower bound")
    p.add_argument("--high", type=int, default=45000, help="uniform signal upper bound")
    if signal:
        p.add_argument("--signal-count", type=int, default=4)
    p.add_argument("--n", type=int, default=1855)
    p.add_argument("--width", type=int, choices=(8, 16, 32), default=32)
    p.add_argument("--seed", type=int, default=0)


def _distribution(args, a=0):
    return DistributionSpec(args.mu, args.sigma, args.low, args.high, getattr(args, "signal_count", a), args.n)


def build_parser():
    parser = _Parser(prog="polypack", description="Polynomial compression of integer sensor data.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write synthetic noise+signal data as raw integers")
    _add_distribution(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compress", help="raw integers -> container")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, choices=(8, 16, 32), default=32)
    p.add_argument("--codec", choices=("basic", "advanced", "auto"), default="auto")
    p.add_argument("--block-size", type=int, default=None, help="0 = whole vector; matrix default: one row")
    p.add_argument("--matrix", type=_shape, default=None, metavar="RxC")
    p.add_argument("--post", default=None, metavar="CMD", help="filter the container through CMD")

    p = sub.add_parser("decompress", help="container -> raw integers")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pre", default=None, metavar="CMD", help="filter the input through CMD first")
    p.add_argument("--blocks", type=_block_range, default=None, metavar="J..K")

    for name, help_ in (("bench-block", "ratio versus block size (CSV)"), ("bench-signal", "ratio versus signal fraction (CSV)")):
        p = sub.add_parser(name, help=help_)
        _add_distribution(p, signal=name == "bench-block")
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--codec", choices=("basic", "advanced", "auto"), default="advanced")
        p.add_argument("--out", default="-")
        if name == "bench-block":
            p.add_argument("--block-sizes", type=_int_list, default=[16, 32, 64, 100, 154, 200, 300, 500, 1000, 0])
        else:
            p.add_argument("--fractions", type=_float_list, default=[0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
            p.add_argument("--block-size", type=int, default=154)

    p = sub.add_parser("hist", help="byte-value histogram (CSV)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--csv", default="-")

    p = sub.add_parser("info", help="print container header fields")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pre", default=None, metavar="CMD")
    return parser


def _cmd_gen(args):
    values = generate(_distribution(args), args.seed, args.width)
    buf = io.BytesIO()
    write_raw(values, buf, args.width)
    _write(args.out, buf.getvalue())


def _cmd_compress(args):
    values = read_raw(_read(args.input), args.width)
    if args.matrix is not None:
        rows, cols = args.matrix
        if rows * cols != len(values):
            raise UsageError(f"--matrix {rows}x{cols} does not match {len(values)} values")
        values = values.reshape(rows, cols)
    block = args.block_size
    if block is None:
        block = args.matrix[1] if args.matrix else 0
    out = encode_container(values, BlockPlan(block, CodecPolicy.parse(args.codec)), args.width)
    if args.post:
        out = post_stage(out, args.post)
    _write(args.out, out)


def _load_container(args):
    data = _read(args.input)
    if args.pre:
        data = post_stage(data, args.pre)
    return data


def _cmd_decompress(args):
    data = _load_container(args)
    decoded = decode_container(data, args.blocks)
    values = np.ascontiguousarray(decoded.values).reshape(-1)
    _write(args.out, values.astype(f"<u{decoded.header.width_bits // 8}").tobytes())


def _cmd_bench_block(args):
    spec = bench.SweepSpec(_distribution(args), tuple(args.block_sizes), args.trials, args.seed, CodecPolicy.parse(args.codec), args.width)
    rows = bench.sweep_block_size(spec)
    _write_text(args.out, lambda fh: bench.write_csv(rows, fh))


def _cmd_bench_signal(args):
    rows = bench.sweep_signal_fraction(
        _distribution(args), args.fractions, args.block_size, args.trials, args.seed,
        CodecPolicy.parse(args.codec), args.width,
    )
    _write_text(args.out, lambda fh: bench.write_csv(rows, fh))


def _cmd_hist(args):
    counts = bench.byte_histogram(_read(args.input))
    _write_text(args.csv, lambda fh: bench.write_histogram_csv(counts, fh))
    print(f"chi-square distance to uniform: {bench.chi_square_uniform(counts):.6g}", file=sys.stderr)


def _cmd_info(args):
    info = container_info(_load_container(args))
    width = max(len(k) for k in info)
    lines = [f"{k:<{width}}  {v:.6g}" if isinstance(v, float) else f"{k:<{width}}  {v}" for k, v in info.items()]
    _write("-", ("\n".join(lines) + "\n").encode())


_COMMANDS = {
    "gen": _cmd_gen,
    "compress": _cmd_compress,
    "decompress": _cmd_decompress,
    "bench-block": _cmd_bench_block,
    "bench-signal": _cmd_bench_signal,
    "hist": _cmd_hist,
    "info": _cmd_info,
}


def run(argv=None):
    """Run one subcommand and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"polypack: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PostStageFailed as exc:
        print(f"polypack: {exc}", file=sys.stderr)
        return EXIT_FILTER
    except (PolypackError, ValueError, IndexError) as exc:
        print(f"polypack: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"polypack: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
