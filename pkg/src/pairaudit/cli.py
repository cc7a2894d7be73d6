"""Command-line entry point: ``pairaudit <command> ...``.

Exit status is 0 when everything checked out, 1 when a check found a
violation (details on stderr) and 2 for a malformed or invalid trace, a
failed operation precondition, or bad arguments.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import analyzer as an
from .heap import EmptyHeap, Heap, InvalidHandle, NotADecrease
from .oracle import run_and_compare
from .potential import classic_potential
from .workloads import (DeleteMin, GetMin, Insert, TraceError, gen_dijkstra_like, gen_random,
                        gen_sorted, read_trace, replay, validate, write_trace)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

PRECONDITION_ERRORS = (EmptyHeap, InvalidHandle, NotADecrease)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f'{self.prog}: error: {message}', file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _err(msg):
    print(msg, file=sys.stderr)


def _load(path):
    try:
        return read_trace(path)
    except OSError as exc:
        raise _UsageError(f'cannot read {path}: {exc.strerror}') from None
    except UnicodeDecodeError:
        raise _UsageError(f'{path}: not UTF-8 text') from None
    except TraceError as exc:
        raise _UsageError(f'{path}: malformed trace: {exc}') from None


class _UsageError(Exception):
    pass


def _analyze(trace, args, keep_pairings=False):
    a = an.Analyzer(checkpoint_every=args.checkpoint_every, keep_pairings=keep_pairings,
                    label=getattr(args, 'trace', ''))
    try:
        replay(trace, a)
    except PRECONDITION_ERRORS as exc:
        op = len(a.ledger)
        raise _UsageError(f'operation {op + 1} failed: {type(exc).__name__}: {exc}') from None
    a.checkpoint(potential=True)
    return a


def _report(reps, out=None):
    out = out or sys.stdout
    ok = True
    for rep in reps:
        print(rep.summary(), file=out)
        for k, v in rep.stats.items():
            if isinstance(v, float):
                v = f'{v:.6g}'
            print(f'    {k} = {v}', file=out)
        for note in rep.notes[:5]:
            print(f'    note: {note}', file=out)
        if len(rep.notes) > 5:
            print(f'    note: ... {len(rep.notes) - 5} more', file=out)
        if not rep.ok:
            ok = False
            for v in rep.violations[:20]:
                _err(f'{rep.name}: {v}')
            if len(rep.violations) > 20:
                _err(f'{rep.name}: ... {len(rep.violations) - 20} more')
    return ok


def _structural_report(a):
    rep = an.Report('structural invariants', checked=a.checkpoints)
    rep.violations.extend(a.violations)
    return rep


# ----------------------------------------------------------------- commands

def cmd_generate(args):
    kind, params = args.kind, args.params
    try:
        if kind == 'sorted':
            if len(params) not in (1, 2):
                raise ValueError('sorted takes: N [asc|desc]')
            order = params[1] if len(params) == 2 else 'asc'
            if order not in ('asc', 'desc'):
                raise ValueError(f'order must be asc or desc, not {order!r}')
            trace = gen_sorted(int(params[0]), order == 'asc')
        elif kind == 'random':
            if len(params) != 3:
                raise ValueError('random takes: N OPS_EXTRA SEED')
            trace = gen_random(*map(int, params))
        else:
            if len(params) != 3:
                raise ValueError('dijkstra takes: V E SEED')
            trace = gen_dijkstra_like(*map(int, params))
    except ValueError as exc:
        raise _UsageError(f'generate {kind}: {exc}') from None
    write_trace(args.output, trace)
    print(f'wrote {len(trace)} operations to {args.output}')
    return EXIT_OK


def cmd_run(args):
    trace = _load(args.trace)
    t0 = time.perf_counter()
    a = _analyze(trace, args)
    elapsed = time.perf_counter() - t0
    if args.csv:
        with open(args.csv, 'w', encoding='utf-8', newline='') as fh:
            a.ledger.write_csv(fh)
    phi = a.potential()
    print(f'{len(trace)} operations in {elapsed:.2f}s, n={a.n}, N={a.N}')
    print(f'final potential: node={phi.node:.3f} edge={phi.edge:g} size={phi.size:g} '
          f'total={phi.total:.3f}')
    print(f'actual cost {sum(r.actual for r in a.ledger)}, '
          f'{a.heap.pairings} pairings, {a.checkpoints} checkpoints')
    return EXIT_OK if _report([_structural_report(a)]) else EXIT_VIOLATION


def cmd_validate(args):
    trace = _load(args.trace)
    try:
        validate(trace)
    except TraceError as exc:
        raise _UsageError(f'{args.trace}: invalid trace: operation {exc}') from None
    reps = [run_and_compare(trace)]
    a = _analyze(trace, args)
    reps += [
        _structural_report(a),
        an.check_linear_range(a.ledger),
        an.check_amortized_bounds(a.ledger, c_dm=args.c_dm),
        an.check_pairing_lemmas(a.ledger),
        an.check_telescoping(a.ledger),
        an.check_decomposition(a.ledger),
    ]
    return EXIT_OK if _report(reps) else EXIT_VIOLATION


def _classic_samples(trace, every):
    """Classic potential at every ``every`` ops and wherever inserts give way to deletions."""
    h = Heap(int_keys=True)
    best = 0.0
    best_n = 0
    prev_delete = True
    for i, op in enumerate(trace):
        t = type(op)
        if (t is DeleteMin and not prev_delete) or (every and i % every == 0):
            c = classic_potential(h)
            if c > best:
                best, best_n = c, h.n
        prev_delete = t is DeleteMin
        # a fresh heap issues handles in insertion order, so trace ids are handles
        if t is Insert:
            h.insert(op.key)
        elif t is DeleteMin:
            h.delete_min()
        elif t is GetMin:
            h.get_min()
        else:
            h.decrease_key(op.id, op.key)
    c = classic_potential(h)
    if c > best:
        best, best_n = c, h.n
    return best, best_n


def cmd_range(args):
    trace = _load(args.trace)
    a = _analyze(trace, args)
    rep = an.check_linear_range(a.ledger)
    peak = max((r.n_after for r in a.ledger), default=0)
    try:
        classic, classic_n = _classic_samples(trace, args.every)
    except PRECONDITION_ERRORS as exc:
        raise _UsageError(f'{type(exc).__name__}: {exc}') from None
    rep.stats['max_n'] = peak
    rep.stats['max_classic'] = classic
    rep.stats['classic_at_n'] = classic_n
    if classic_n > 1:
        rep.stats['classic_per_n_lg_n'] = classic / (classic_n * an._lg(classic_n))
    ok = _report([rep, _structural_report(a)])
    return EXIT_OK if ok else EXIT_VIOLATION


def _bench_once(trace):
    h = Heap(int_keys=True)
    t0 = time.perf_counter()
    replay(trace, h)
    return time.perf_counter() - t0, h.pairings


def cmd_bench(args):
    trace = _load(args.trace)
    if args.repeat < 1:
        raise _UsageError('--repeat must be at least 1')
    try:
        _bench_once(trace)
    except PRECONDITION_ERRORS as exc:
        raise _UsageError(f'{type(exc).__name__}: {exc}') from None
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            runs = list(pool.map(_bench_once, [trace] * args.repeat))
    else:
        runs = [_bench_once(trace) for _ in range(args.repeat)]
    times = [t for t, _ in runs]
    pairings = runs[0][1]
    best = min(times)
    print(f'{len(trace)} operations, {pairings} pairings, {args.repeat} runs')
    print(f'min {best:.4f}s  median {statistics.median(times):.4f}s  '
          f'max {max(times):.4f}s  ({len(trace) / best:,.0f} ops/s at best)')
    return EXIT_OK


def build_parser():
    p = _Parser(prog='pairaudit', description='Pairing heap with an instrumented '
                'linear-range potential.')
    sub = p.add_subparsers(dest='command', required=True, parser_class=_Parser)

    g = sub.add_parser('generate', help='write a generated trace')
    g.add_argument('kind', choices=('sorted', 'random', 'dijkstra'))
    g.add_argument('params', nargs='+',
                   help='sorted: N [asc|desc]; random: N OPS_EXTRA SEED; dijkstra: V E SEED')
    g.add_argument('-o', '--output', required=True)
    g.set_defaults(func=cmd_generate)

    def checkpoint_flag(sp):
        sp.add_argument('--checkpoint-every', type=int, default=1000, metavar='K',
                        help='full potential recount every K operations (default 1000)')

    r = sub.add_parser('run', help='replay a trace through the analyzer')
    r.add_argument('trace')
    r.add_argument('--csv', help='write the per-operation ledger here')
    checkpoint_flag(r)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser('validate', help='oracle comparison and every assertion suite')
    v.add_argument('trace')
    v.add_argument('--c-dm', type=float, default=None, metavar='C',
                   help='also bound delete-min amortized cost by C (lg n + 2)')
    checkpoint_flag(v)
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser('range', help='largest potential per node vs the classic potential')
    g.add_argument('trace')
    g.add_argument('--every', type=int, default=1000, metavar='K',
                   help='sample the classic potential every K operations (default 1000)')
    checkpoint_flag(g)
    g.set_defaults(func=cmd_range)

    b = sub.add_parser('bench', help='time plain heap replays')
    b.add_argument('trace')
    b.add_argument('--repeat', type=int, default=5)
    b.add_argument('--jobs', type=int, default=1, help='parallel worker processes')
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        _err(f'pairaudit: {exc}')
        return EXIT_USAGE
    except an.InstrumentationGap as exc:
        _err(f'pairaudit: {exc}')
        return EXIT_VIOLATION


if __name__ == '__main__':
    sys.exit(main())
