"""Shared instances for the test modules."""

from wittdisp.frames import frame_relative, frame_witt
from wittdisp.ring import RingHom, ring_make


def dual(p):
    return ring_make(p, 1, ["e"], [{"e": 2}])


def relative(S, R, images, pd, prec):
    alpha = RingHom(S, R, images)
    return frame_relative(alpha, alpha.kernel(pd=pd), prec)


def frame_instances():
    """(name, frame) pairs covering zero, square-zero trivial and p-adic kernels."""
    F2, F3 = ring_make(2, 1), ring_make(3, 1)
    t3 = ring_make(2, 1, ["t"], [{"t": 3}])
    t2 = ring_make(2, 1, ["t"], [{"t": 2}])
    return [
        ("witt F2[e]", frame_witt(dual(2), 3)),
        ("witt F2[t]/t^3", frame_witt(t3, 2)),
        ("F2[e] -> F2 trivial", relative(dual(2), F2, {"e": 0}, "trivial", 3)),
        ("F3[e] -> F3 trivial", relative(dual(3), F3, {"e": 0}, "trivial", 2)),
        ("Z/4 -> F2 p-adic", relative(ring_make(2, 2), F2, {}, "p-adic", 3)),
        ("Z/9 -> F3 p-adic", relative(ring_make(3, 2), F3, {}, "p-adic", 2)),
        ("F2[t]/t^3 -> F2[t]/t^2 trivial", relative(t3, t2, {"t": t2.gen("t")}, "trivial", 3)),
    ]


def display_frames():
    F2 = ring_make(2, 1)
    return [frame_witt(dual(2), 3), relative(dual(2), F2, {"e": 0}, "trivial", 3),
            relative(ring_make(2, 2), F2, {}, "p-adic", 3)]


# criterion number -> (ok, summary); printed by the terminal summary hook
ACCEPTANCE = {}


def record(k, ok, summary):
    ACCEPTANCE[k] = (bool(ok), summary)
    return ok


def acceptance_lines():
    return [f"{'PASS' if ok else 'FAIL'} criterion {k}: {text}"
            for k, (ok, text) in sorted(ACCEPTANCE.items())]
