"""Line-oriented text formats for models, graphs and DNFs.

Every file starts with a header line naming its kind.  ``#`` starts a
comment.  Rationals are written ``p/q`` (``q`` omitted when 1); the decimal
form ``d.ddd`` is also read.

::

    fbdd dim=2
    node 1 var 1 lo 2 hi T
    node 2 var 2 lo F hi T
    root 1

    perceptron dim=3
    w 3 -5 -2
    b 1

    mlp dims=2,1,1
    W 1          # one W line per input row of the layer
    W 1
    b -1
    act relu
    W 2
    b -1
    act step

    circuit vars=2               majcircuit vars=3
    gate a input 1               gate a input 1
    gate b input 2               gate b input 2
    gate n not a                 gate c input 3
    gate o or n b                gate g maj a:2,b,c
    output o                     output g

    undirected                   dnf vars=3
    edge 1 2                     term 1 -2
    edge 2 3                     term 2 3   # the last term is the core
"""
from __future__ import annotations

import re
from fractions import Fraction

from .circuits import And, BoolCircuit, Input, Maj, MajCircuit, Not, Or
from .core import FALSE_LEAF, TRUE_LEAF, Fbdd, Inner, Layer, Leaf, Mlp, Perceptron, XQError, check_fbdd

_RATIONAL = re.compile(r"^-?\d+(/\d+|\.\d+)?$")


class ParseError(XQError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield number, raw, body.split()


def _col(raw: str, token: str) -> int:
    return raw.find(token) + 1


def parse_rational(token: str, line: int = 0, column: int = 0) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"not a rational: {token!r}", line, column)
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {token!r}", line, column) from None


def format_rational(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _header_args(words, number, raw):
    args = {}
    for word in words[1:]:
        key, sep, value = word.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {word!r}", number, _col(raw, word))
        args[key] = value
    return args


def _int(token, number, raw, what="integer"):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected {what}, got {token!r}", number, _col(raw, token)) from None


def _node_id(token: str):
    if token in (TRUE_LEAF, FALSE_LEAF):
        return token
    return int(token) if token.lstrip("-").isdigit() else token


KINDS = ("fbdd", "perceptron", "mlp", "circuit", "majcircuit", "directed", "undirected", "dnf")


def detect_kind(text: str) -> str:
    for number, raw, words in _lines(text):
        if words[0] in KINDS:
            return words[0]
        raise ParseError(f"unknown header {words[0]!r}", number, 1)
    raise ParseError("empty input")


def parse_model(text: str, kind: str = None):
    """Parse any supported model; FBDDs are validated."""
    found = detect_kind(text)
    if kind is not None and kind != found:
        raise ParseError(f"expected a {kind} model, found {found}")
    parser = {
        "fbdd": _parse_fbdd,
        "perceptron": _parse_perceptron,
        "mlp": _parse_mlp,
        "circuit": _parse_circuit,
        "majcircuit": _parse_circuit,
    }.get(found)
    if parser is None:
        raise ParseError(f"{found} is not a model kind")
    return parser(text)


def _parse_fbdd(text: str) -> Fbdd:
    lines = list(_lines(text))
    number, raw, words = lines[0]
    dim = _int(_header_args(words, number, raw).get("dim", ""), number, raw, "dim=N")
    nodes = {}
    root = None
    for number, raw, words in lines[1:]:
        if words[0] == "node":
            if len(words) != 8 or words[2] != "var" or words[4] != "lo" or words[6] != "hi":
                raise ParseError("expected 'node <id> var <i> lo <id> hi <id>'", number, 1)
            nid = _node_id(words[1])
            if nid in nodes or nid in (TRUE_LEAF, FALSE_LEAF):
                raise ParseError(f"duplicate node id {words[1]!r}", number, _col(raw, words[1]))
            nodes[nid] = Inner(_int(words[3], number, raw, "feature index"), _node_id(words[5]), _node_id(words[7]))
        elif words[0] == "root":
            if len(words) != 2:
                raise ParseError("expected 'root <id>'", number, 1)
            root = _node_id(words[1])
        else:
            raise ParseError(f"unexpected {words[0]!r}", number, 1)
    if root is None:
        raise ParseError("missing root line")
    return check_fbdd(Fbdd(nodes, root, dim))


def _parse_perceptron(text: str) -> Perceptron:
    lines = list(_lines(text))
    number, raw, words = lines[0]
    dim = _int(_header_args(words, number, raw).get("dim", ""), number, raw, "dim=N")
    w = b = None
    for number, raw, words in lines[1:]:
        values = [parse_rational(t, number, _col(raw, t)) for t in words[1:]]
        if words[0] == "w":
            w = values
        elif words[0] == "b" and len(values) == 1:
            b = values[0]
        else:
            raise ParseError(f"unexpected {words[0]!r}", number, 1)
    if w is None or b is None:
        raise ParseError("perceptron needs a 'w' and a 'b' line")
    if len(w) != dim:
        raise ParseError(f"dim={dim} but {len(w)} weights")
    return Perceptron(w, b)


def _parse_mlp(text: str) -> Mlp:
    lines = list(_lines(text))
    number, raw, words = lines[0]
    spec = _header_args(words, number, raw).get("dims", "")
    dims = [_int(d, number, raw, "dims=d0,d1,...") for d in spec.split(",") if d]
    if len(dims) < 2:
        raise ParseError("dims needs at least two entries", number, 1)
    layers = []
    rows, bias = [], None
    for number, raw, words in lines[1:]:
        if words[0] == "W":
            rows.append([parse_rational(t, number, _col(raw, t)) for t in words[1:]])
        elif words[0] == "b":
            bias = [parse_rational(t, number, _col(raw, t)) for t in words[1:]]
        elif words[0] == "act" and len(words) == 2:
            i = len(layers)
            if i + 1 >= len(dims):
                raise ParseError("more layers than dims declares", number, 1)
            if bias is None or len(rows) != dims[i] or any(len(r) != dims[i + 1] for r in rows) \
                    or len(bias) != dims[i + 1]:
                raise ParseError(f"layer {i + 1} must be {dims[i]} W rows of {dims[i + 1]} values and a b line",
                                 number, 1)
            if words[1] not in ("relu", "step"):
                raise ParseError(f"unknown activation {words[1]!r}", number, _col(raw, words[1]))
            layers.append(Layer(rows, bias, words[1]))
            rows, bias = [], None
        else:
            raise ParseError(f"unexpected {words[0]!r}", number, 1)
    if len(layers) != len(dims) - 1:
        raise ParseError(f"dims declares {len(dims) - 1} layers, found {len(layers)}")
    try:
        return Mlp(layers, dims[0])
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _split_ids(words):
    return [t for w in words for t in w.split(",") if t]


def _parse_circuit(text: str):
    lines = list(_lines(text))
    number, raw, words = lines[0]
    n = _int(_header_args(words, number, raw).get("vars", ""), number, raw, "vars=N")
    majority = words[0] == "majcircuit"
    gates = {}
    output = None
    for number, raw, words in lines[1:]:
        if words[0] == "output" and len(words) == 2:
            output = words[1]
            continue
        if words[0] != "gate" or len(words) < 3:
            raise ParseError(f"unexpected {words[0]!r}", number, 1)
        gid, op, args = words[1], words[2], _split_ids(words[3:])
        if gid in gates:
            raise ParseError(f"duplicate gate id {gid!r}", number, _col(raw, gid))
        if op == "input" and len(args) == 1:
            gates[gid] = Input(_int(args[0], number, raw, "variable index"))
        elif op == "not" and len(args) == 1 and not majority:
            gates[gid] = Not(args[0])
        elif op == "and" and not majority:
            gates[gid] = And(tuple(args))
        elif op == "or" and not majority:
            gates[gid] = Or(tuple(args))
        elif op == "maj" and majority:
            inputs = []
            for a in args:
                child, _, mult = a.partition(":")
                inputs.append((child, _int(mult, number, raw, "multiplicity") if mult else 1))
            gates[gid] = Maj(tuple(inputs))
        else:
            raise ParseError(f"bad gate {op!r} for a {words[0]}", number, _col(raw, op))
    if output is None:
        raise ParseError("missing output line")
    cls = MajCircuit if majority else BoolCircuit
    try:
        return cls(gates, output, n)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_graph(text: str):
    """Returns ``(directed, edges, n)``; ``n`` is the ``vertices=`` header value or the largest endpoint."""
    lines = list(_lines(text))
    number, raw, words = lines[0]
    if words[0] not in ("directed", "undirected"):
        raise ParseError("graph files start with 'directed' or 'undirected'", number, 1)
    args = _header_args(words, number, raw)
    directed = words[0] == "directed"
    edges = []
    for number, raw, words in lines[1:]:
        if words[0] != "edge" or len(words) != 3:
            raise ParseError("expected 'edge u v'", number, 1)
        u, v = (_int(t, number, raw, "vertex") for t in words[1:])
        if u < 1 or v < 1:
            raise ParseError("vertices are numbered from 1", number, 1)
        edges.append((u, v))
    n = int(args["vertices"]) if "vertices" in args else max((max(e) for e in edges), default=0)
    return directed, edges, n


def parse_dnf(text: str):
    from .reductions import Dnf

    lines = list(_lines(text))
    number, raw, words = lines[0]
    if words[0] != "dnf":
        raise ParseError("DNF files start with 'dnf vars=N'", number, 1)
    n = _int(_header_args(words, number, raw).get("vars", ""), number, raw, "vars=N")
    terms = []
    for number, raw, words in lines[1:]:
        if words[0] != "term":
            raise ParseError(f"unexpected {words[0]!r}", number, 1)
        terms.append(tuple(_int(t, number, raw, "literal") for t in words[1:]))
    if not terms:
        raise ParseError("a DNF needs at least one term")
    try:
        return Dnf(n, tuple(terms))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# --------------------------------------------------------------------------- serialization


def serialize_model(model) -> str:
    if isinstance(model, Fbdd):
        return _serialize_fbdd(model)
    if isinstance(model, Perceptron):
        return (f"perceptron dim={model.dim}\n"
                f"w {' '.join(format_rational(v) for v in model.w)}\n"
                f"b {format_rational(model.b)}\n")
    if isinstance(model, Mlp):
        out = [f"mlp dims={','.join(str(d) for d in model.dims)}"]
        for layer in model.layers:
            out.extend("W " + " ".join(format_rational(v) for v in row) for row in layer.weights)
            out.append("b " + " ".join(format_rational(v) for v in layer.bias))
            out.append(f"act {layer.act}")
        return "\n".join(out) + "\n"
    if isinstance(model, (BoolCircuit, MajCircuit)):
        return _serialize_circuit(model)
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _token(gid) -> str:
    text = str(gid)
    if not re.fullmatch(r"[A-Za-z0-9_.\-]+", text) or text in (TRUE_LEAF, FALSE_LEAF):
        raise ValueError(f"id {gid!r} is not writable as a token; use relabel_ids first")
    return text


def _serialize_fbdd(m: Fbdd) -> str:
    out = [f"fbdd dim={m.dim}"]
    for nid, node in m.nodes.items():
        if isinstance(node, Leaf):
            continue
        out.append(f"node {_token(nid)} var {node.label} lo {_leaf_or_token(node.lo)} hi {_leaf_or_token(node.hi)}")
    out.append(f"root {_leaf_or_token(m.root)}")
    return "\n".join(out) + "\n"


def _leaf_or_token(nid) -> str:
    return nid if nid in (TRUE_LEAF, FALSE_LEAF) else _token(nid)


def _serialize_circuit(c) -> str:
    out = [f"{'majcircuit' if isinstance(c, MajCircuit) else 'circuit'} vars={c.n}"]
    for gid in c.topo_order:
        gate = c.gates[gid]
        if isinstance(gate, Input):
            body = f"input {gate.var}"
        elif isinstance(gate, Not):
            body = f"not {_token(gate.child)}"
        elif isinstance(gate, And):
            body = "and " + " ".join(_token(g) for g in gate.children)
        elif isinstance(gate, Or):
            body = "or " + " ".join(_token(g) for g in gate.children)
        else:
            body = "maj " + ",".join(f"{_token(g)}:{mult}" for g, mult in gate.inputs)
        out.append(f"gate {_token(gid)} {body}".rstrip())
    out.append(f"output {_token(c.output)}")
    return "\n".join(out) + "\n"


def relabel_ids(model):
    """Copy of an FBDD or circuit with ids renamed to ``n0, n1, ...`` (leaves keep ``T``/``F``)."""
    if isinstance(model, Fbdd):
        names = {nid: f"n{i}" for i, nid in enumerate(model.bottom_up)
                 if isinstance(model.nodes[nid], Inner)}
        names[TRUE_LEAF], names[FALSE_LEAF] = TRUE_LEAF, FALSE_LEAF
        nodes = {names[nid]: Inner(model.nodes[nid].label, names[model.nodes[nid].lo], names[model.nodes[nid].hi])
                 for nid in model.bottom_up if isinstance(model.nodes[nid], Inner)}
        return Fbdd(nodes, names[model.root], model.dim)
    names = {gid: f"g{i}" for i, gid in enumerate(model.topo_order)}
    gates = {}
    for gid in model.topo_order:
        gate = model.gates[gid]
        if isinstance(gate, Not):
            gate = Not(names[gate.child])
        elif isinstance(gate, And):
            gate = And(tuple(names[g] for g in gate.children))
        elif isinstance(gate, Or):
            gate = Or(tuple(names[g] for g in gate.children))
        elif isinstance(gate, Maj):
            gate = Maj(tuple((names[g], m) for g, m in gate.inputs))
        gates[names[gid]] = gate
    return type(model)(gates, names[model.output], model.n)


def serialize_graph(edges, directed: bool, n: int = None) -> str:
    head = "directed" if directed else "undirected"
    if n is not None:
        head += f" vertices={n}"
    return "\n".join([head] + [f"edge {u} {v}" for u, v in edges]) + "\n"


def serialize_dnf(dnf) -> str:
    return "\n".join([f"dnf vars={dnf.n}"] + ["term " + " ".join(str(l) for l in t) for t in dnf.terms]) + "\n"
