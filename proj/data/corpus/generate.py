#!/usr/bin/env python3
"""Writes the handcrafted fixture netlists in this directory.

Each LUT's INIT is computed from a Python function over its pins (I0 = LSB).
Run from anywhere: python3 data/corpus/generate.py
"""
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


class Design:
    def __init__(self, name):
        self.name = name
        self.inputs, self.outputs, self.wires = [], [], []
        self.cells = []
        self.assigns = []
        self._n = 0

    def inp(self, name):
        self.inputs.append(name)
        return name

    def out(self, name, net):
        self.outputs.append(name)
        self.assigns.append((name, net))

    def wire(self, hint="n"):
        self._n += 1
        w = f"{hint}_{self._n}"
        self.wires.append(w)
        return w

    def lut(self, ins, fn, name=None, hint="n"):
        k = len(ins)
        assert 1 <= k <= 6
        mask = 0
        for a in range(1 << k):
            bits = [(a >> j) & 1 for j in range(k)]
            if fn(*bits):
                mask |= 1 << a
        o = self.wire(hint)
        name = name or f"lut_{o}"
        digits = max(1, (1 << k) // 4)
        pins = ", ".join(f".I{j}({n})" for j, n in enumerate(ins))
        self.cells.append(f"LUT{k} #(.INIT({1 << k}'h{mask:0{digits}X})) {name} ({pins}, .O({o}));")
        return o

    def ff(self, d=None, name=None):
        q = self.wire("q")
        name = name or f"ff_{q}"
        self.cells.append([name, d, q])
        return q

    def set_ff(self, q, d):
        for c in self.cells:
            if isinstance(c, list) and c[2] == q:
                c[1] = d

    def cell(self, text):
        self.cells.append(text)

    def emit(self):
        lines = [f"// {self.name}: generated by generate.py", f"module {self.name} ({', '.join(self.inputs + self.outputs)});"]
        lines += [f"  input {i};" for i in self.inputs]
        lines += [f"  output {o};" for o in self.outputs]
        lines += [f"  wire {w};" for w in self.wires]
        for c in self.cells:
            if isinstance(c, list):
                assert c[1] is not None, c
                lines.append(f"  FF {c[0]} (.D({c[1]}), .Q({c[2]}));")
            else:
                lines.append("  " + c)
        lines += [f"  assign {a} = {b};" for a, b in self.assigns]
        lines.append("endmodule")
        with open(os.path.join(HERE, self.name + ".v"), "w") as f:
            f.write("\n".join(lines) + "\n")


def rand_fn(rng, k):
    mask = rng.getrandbits(1 << k)
    return lambda *b: (mask >> sum(v << j for j, v in enumerate(b))) & 1


def sbm25():
    # 25 LUTs, 11 of them LUT6, with a small register stage.
    rng = random.Random(25)
    d = Design("sbm25")
    pis = [d.inp(f"x{i}") for i in range(12)]
    regs = [d.ff() for _ in range(4)]
    pool = pis + regs
    widths = [6] * 11 + [5] * 4 + [4] * 4 + [3] * 3 + [2] * 3
    rng.shuffle(widths)
    outs = []
    for w in widths:
        ins = rng.sample(pool, w)
        o = d.lut(ins, rand_fn(rng, w))
        pool.append(o)
        outs.append(o)
    for i, q in enumerate(regs):
        d.set_ff(q, outs[-1 - i])
    for i, o in enumerate(outs[-6:]):
        d.out(f"y{i}", o)
    d.emit()


def adder8():
    d = Design("adder8")
    a = [d.inp(f"a{i}") for i in range(8)]
    b = [d.inp(f"b{i}") for i in range(8)]
    c = d.inp("cin")
    for i in range(8):
        p = d.lut([a[i], b[i]], lambda x, y: x ^ y, hint="p")
        s = d.lut([p, c], lambda x, y: x ^ y, hint="s")
        co = d.wire("c")
        d.cell(f"CARRY carry{i} (.A({a[i]}), .B({b[i]}), .CI({c}), .CO({co}));")
        d.out(f"s{i}", s)
        c = co
    d.out("cout", c)
    d.emit()


def parity16():
    d = Design("parity16")
    x = [d.inp(f"x{i}") for i in range(16)]
    lvl1 = [d.lut(x[i:i + 4], lambda *b: sum(b) & 1) for i in range(0, 16, 4)]
    mid = d.lut(lvl1[:3], lambda *b: sum(b) & 1)
    p = d.lut([mid, lvl1[3]], lambda a, b: a ^ b)
    inv = d.lut([p], lambda a: 1 - a)
    d.out("even", inv)
    d.out("odd", p)
    d.emit()


def mux16():
    d = Design("mux16")
    data = [d.inp(f"d{i}") for i in range(16)]
    sel = [d.inp(f"s{i}") for i in range(4)]
    quads = [d.lut(data[i:i + 4] + sel[:2], lambda a, b, c, e, s0, s1: [a, b, c, e][s0 + 2 * s1]) for i in range(0, 16, 4)]
    m0, m1 = d.wire("m"), d.wire("m")
    d.cell(f"MUX2 mux_lo (.I0({quads[0]}), .I1({quads[1]}), .S({sel[2]}), .O({m0}));")
    d.cell(f"MUX2 mux_hi (.I0({quads[2]}), .I1({quads[3]}), .S({sel[2]}), .O({m1}));")
    y = d.lut([m0, m1, sel[3]], lambda a, b, s: b if s else a)
    d.out("y", y)
    d.emit()


def counter4():
    d = Design("counter4")
    en = d.inp("en")
    rst = d.inp("rst")
    q = [d.ff() for _ in range(4)]
    for i in range(4):
        ins = [rst, en] + q[:i + 1]
        def nxt(r, e, *bits, i=i):
            if r:
                return 0
            carry = e and all(bits[:i])
            return bits[i] ^ carry
        d.set_ff(q[i], d.lut(ins, nxt))
    tc = d.lut(q, lambda *b: int(all(b)))
    d.out("tc", tc)
    for i in range(4):
        d.out(f"q{i}", q[i])
    d.emit()


def comparator8():
    d = Design("comparator8")
    a = [d.inp(f"a{i}") for i in range(8)]
    b = [d.inp(f"b{i}") for i in range(8)]
    lt, eq = None, None
    for i in range(0, 8, 2):
        # 2-bit slice: lt/eq of (a[i+1:i] vs b[i+1:i]).
        sl = d.lut([a[i], a[i + 1], b[i], b[i + 1]], lambda x0, x1, y0, y1: int(x0 + 2 * x1 < y0 + 2 * y1))
        se = d.lut([a[i], a[i + 1], b[i], b[i + 1]], lambda x0, x1, y0, y1: int(x0 == y0 and x1 == y1))
        if lt is None:
            lt, eq = sl, se
        else:
            lt = d.lut([lt, eq, sl, se], lambda pl, pe, l, e: int(l or (e and pl)))
            eq = d.lut([eq, se], lambda x, y: x & y)
    d.out("lt", lt)
    d.out("eq", eq)
    gt = d.lut([lt, eq], lambda l, e: int(not l and not e))
    d.out("gt", gt)
    d.emit()


def alu4():
    d = Design("alu4")
    a = [d.inp(f"a{i}") for i in range(4)]
    b = [d.inp(f"b{i}") for i in range(4)]
    op = [d.inp(f"op{i}") for i in range(2)]
    carry = None
    for i in range(4):
        ins = [a[i], b[i], op[0], op[1]] + ([carry] if carry else [])
        def res(x, y, o0, o1, c=0):
            o = o0 + 2 * o1
            return [x & y, x | y, x ^ y, x ^ y ^ c][o]
        r = d.lut(ins, res)
        def cy(x, y, o0, o1, c=0):
            return int((x + y + c) >= 2) if (o0 and o1) else 0
        carry = d.lut(ins, cy, hint="c")
        d.out(f"r{i}", r)
    d.out("cout", carry)
    zero = d.lut(a + op, lambda *v: int(not any(v)))
    d.out("z", zero)
    d.emit()


def buffered():
    d = Design("buffered")
    xs = [d.inp(f"x{i}") for i in range(6)]
    bx = []
    for i, x in enumerate(xs):
        w = d.wire("b")
        d.cell(f"IBUF ibuf{i} (.I({x}), .O({w}));")
        bx.append(w)
    t = d.lut(bx[:4], lambda a, b, c, e: (a & b) | (c ^ e))
    w = d.wire("b")
    d.cell(f"BUF buf0 (.I({t}), .O({w}));")
    w2 = d.wire("b")
    d.cell(f"BUF buf1 (.I({w}), .O({w2}));")
    u = d.lut([w2, bx[4], bx[5]], lambda a, b, c: a ^ (b & c))
    v = d.lut([u, bx[0]], lambda a, b: a | b)
    for name, net in (("y0", u), ("y1", v)):
        o = d.wire("b")
        d.cell(f"OBUF obuf_{name} (.I({net}), .O({o}));")
        d.out(name, o)
    d.emit()


def lfsr8():
    d = Design("lfsr8")
    seed = d.inp("load")
    din = d.inp("din")
    q = [d.ff() for _ in range(8)]
    fb = d.lut([q[7], q[5], q[4], q[3]], lambda *b: sum(b) & 1)
    d.set_ff(q[0], d.lut([fb, din, seed], lambda f, x, l: x if l else f))
    for i in range(1, 8):
        d.set_ff(q[i], d.lut([q[i - 1], seed, din], lambda p, l, x: 0 if l else p))
    d.out("o", q[7])
    d.out("fb", fb)
    d.emit()


def pinswap_stress():
    # Deep unbalanced cones: late-arriving nets land on slow first pins.
    rng = random.Random(4)
    d = Design("pinswap_stress")
    xs = [d.inp(f"x{i}") for i in range(10)]
    chain = xs[0]
    for i in range(12):
        side = rng.sample(xs[1:], 3)
        chain = d.lut([chain] + side, rand_fn(rng, 4))
    tail = [chain]
    for i in range(3):
        tail.append(d.lut([tail[-1], xs[i + 1], xs[i + 2], xs[i + 3], xs[i + 4], xs[i + 5]], rand_fn(rng, 6)))
    d.out("y", tail[-1])
    alt = xs[9]
    for i in range(6):
        alt = d.lut([alt, xs[i], xs[i + 1]], rand_fn(rng, 3))
    d.out("z", d.lut([alt, chain], lambda a, b: a ^ b))
    # Independent, slightly shallower cone: a second violating end point.
    rng2 = random.Random(5)
    cone = xs[9]
    for i in range(11):
        side = rng2.sample(xs[:9], 3)
        cone = d.lut([cone] + side, rand_fn(rng2, 4))
    d.out("w", cone)
    d.emit()


def and6x10():
    d = Design("and6x10")
    xs = [d.inp(f"x{i}") for i in range(12)]
    for i in range(10):
        o = d.lut([xs[(i + j) % 12] for j in range(6)], lambda *b: int(all(b)))
        d.out(f"y{i}", o)
    d.emit()


def lut2only():
    rng = random.Random(2)
    d = Design("lut2only")
    pool = [d.inp(f"x{i}") for i in range(8)]
    outs = []
    for i in range(24):
        a, b = rng.sample(pool, 2)
        # Full-support masks only: nothing here can shrink.
        mask = rng.choice([0x1, 0x2, 0x4, 0x6, 0x7, 0x8, 0x9, 0xB, 0xD, 0xE])
        o = d.lut([a, b], lambda x, y, m=mask: (m >> (x + 2 * y)) & 1)
        pool.append(o)
        outs.append(o)
    for i, o in enumerate(outs[-4:]):
        d.out(f"y{i}", o)
    d.emit()


if __name__ == "__main__":
    for f in (sbm25, adder8, parity16, mux16, counter4, comparator8, alu4, buffered, lfsr8, pinswap_stress, and6x10,
              lut2only):
        f()
