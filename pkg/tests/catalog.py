"""One minimal broken instance and its repaired twin per rule."""

from __future__ import annotations

from dataclasses import dataclass, field

from wfcompose import (
    COMPOSITION,
    OFFER_ACCEPTANCE,
    ActivityKind,
    ConstraintId,
    InstanceGraph,
    PolicyConfig,
    TransformationSig,
    assign_orders,
    predefined_ontology,
)

K = ActivityKind
C = ConstraintId

UA = "UserAcknowledgement"
SHIPPER_OFFER = {"price": 40, "currency": "Euro", "deliveryDays": 2}


@dataclass
class Case:
    graph: InstanceGraph
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    catalog: tuple | None = None


class Builder:
    """Terse construction of validated-by-hand instances."""

    def __init__(self):
        self.g = InstanceGraph(predefined_ontology())
        self.w = {n: self.g.add_workflow(n) for n in ("W", "V")}
        self.w["C"] = self.g.add_workflow(COMPOSITION, is_composition=True)
        self.a = {}
        self.m = {}

    def act(self, name, kind, owner="W", active=True, role=None):
        self.a[name] = self.g.add_activity(kind, self.w[owner], active=active, role=role, name=name)
        return self

    def msg(self, name, src, dst, type=None, active=True, attrs=None, partial=False):
        m = self.g.add_message(type, active=active, attributes=attrs, name=name, partial=partial)
        if src is not None:
            self.g.connect_output(self.a[src], m)
        if dst is not None:
            self.g.connect_input(self.a[dst], m)
        self.m[name] = m
        return self

    def chain(self):
        """init -> t0 -> act -> t1 -> fin inside W."""
        return (self.act("init", K.INITIAL).act("act", K.ACTION).act("fin", K.FINAL)
                .msg("t0", "init", "act").msg("t1", "act", "fin"))

    def done(self, **kw) -> Case:
        assign_orders(self.g)
        return Case(self.g, **kw)


def s1(ok):
    b = Builder().act("init", K.INITIAL).act("act", K.ACTION).act("fin", K.FINAL).msg("t0", "init", "act")
    attrs = SHIPPER_OFFER if ok else {"price": 40}
    return b.msg("offer", "act", "fin", "ShipperOffer", attrs=attrs, partial=True).done()


def s2(ok):
    b = Builder().act("i1", K.INITIAL).act("join", K.JOIN).act("fin", K.FINAL)
    b.msg("t0", "i1", "join").msg("t1", "join", "fin")
    if ok:
        b.act("i2", K.INITIAL).msg("t2", "i2", "join")
    return b.done()


def s3(ok):
    return Builder().chain().msg("loose", "act", None, active=not ok).done()


def c1(ok):
    b = Builder().chain()
    b.g.messages[b.m["t0"]].active = ok
    return b.done()


def c2(ok):
    b = Builder().act("i1", K.INITIAL).act("i2", K.INITIAL).act("join", K.JOIN).act("fin", K.FINAL)
    return b.msg("x", "i1", "join").msg("y", "i2", "join", active=ok).msg("z", "join", "fin").done()


def c3(ok):
    b = Builder().act("init", K.INITIAL).act("fork", K.FORK).act("f1", K.FINAL).act("f2", K.FINAL)
    return b.msg("t0", "init", "fork", active=ok).msg("o1", "fork", "f1").msg("o2", "fork", "f2", active=ok).done()


def _merge(b, left_active, merge_active, out_active, left_type=None, out_type=None):
    b.act("init", K.INITIAL).act("dec", K.DECISION).act("aL", K.ACTION).act("aR", K.ACTION, active=False)
    b.act("merge", K.MERGE, active=merge_active).act("last", K.ACTION, active=out_active)
    b.act("fin", K.FINAL, active=out_active)
    b.msg("t0", "init", "dec").msg("l", "dec", "aL").msg("r", "dec", "aR", active=False)
    b.msg("lm", "aL", "merge", type=left_type, active=left_active)
    b.msg("rm", "aR", "merge", active=False)
    b.msg("out", "merge", "last", type=out_type, active=out_active)
    b.msg("end", "last", "fin", active=out_active)
    return b


def c4(ok):
    return _merge(Builder(), left_active=ok, merge_active=ok, out_active=True).done()


def c5(ok):
    return _merge(Builder(), left_active=False, merge_active=not ok, out_active=False).done()


def boundary(ok):
    b = Builder().act("i1", K.INITIAL).act("send", K.ACTION).act("i2", K.INITIAL).act("recv", K.ACTION, owner="V")
    b.act("f2", K.FINAL, owner="V").msg("t0", "i1", "send").msg("t1", "i2", "recv").msg("t2", "recv", "f2")
    b.g.activities[b.a["i2"]].owner = b.w["V"]
    if ok:
        b.act("relay", K.FORK, owner="C").msg("hop", "send", "relay", UA).msg("note", "relay", "recv", UA)
    else:
        b.msg("note", "send", "recv", UA)
    return b.done()


def c8(ok):
    b = Builder().chain()
    case = b.done()
    if not ok:
        b.g.messages[b.m["t1"]].order = b.g.messages[b.m["t0"]].order
    return case


def _offer_acceptance(answer_owner):
    b = Builder().act("init", K.INITIAL).act("quote", K.ACTION).act("oa", K.ACTION, owner="C", role=OFFER_ACCEPTANCE)
    b.act("ack", K.EXTERNAL_SIGNAL, owner="C").act("handle", K.ACTION, owner=answer_owner)
    b.act("i2", K.INITIAL, owner=answer_owner).act("fin", K.FINAL, owner=answer_owner)
    b.msg("t0", "init", "quote").msg("offer", "quote", "oa", "ShipperOffer", attrs=SHIPPER_OFFER)
    b.msg("u", "ack", "oa", UA).msg("answer", "oa", "handle", "ShipperOfferAnswer", attrs={"accepted": True})
    b.msg("t2", "i2", "handle").msg("t3", "handle", "fin")
    return b.done(policy=PolicyConfig(user_input_types={UA}))


def c9(ok):
    return _offer_acceptance("W" if ok else "V")


def c10(ok):
    b = Builder().act("init", K.INITIAL).act("act", K.ACTION).act("fork", K.FORK, owner="C")
    b.act("f1", K.FINAL, owner="C").act("f2", K.FINAL, owner="C")
    b.msg("t0", "init", "act").msg("m", "act", "fork", UA)
    return b.msg("o1", "fork", "f1", UA).msg("o2", "fork", "f2", UA if ok else None).done()


def c11(ok):
    b = Builder().act("sig", K.EXTERNAL_SIGNAL, owner="C").act("act", K.ACTION).act("fin", K.FINAL)
    b.msg("u", "sig", "act", UA).msg("t1", "act", "fin")
    return b.done(policy=PolicyConfig(user_input_types={UA} if ok else set()))


def c12(ok):
    b = Builder().act("init", K.INITIAL).act("act", K.ACTION).act("fin", K.FINAL).msg("t0", "init", "act")
    b.msg("offer", "act", "fin", "ShipperOffer", attrs=dict(SHIPPER_OFFER, price=400 if ok else 600))
    return b.done(policy=PolicyConfig(max_price=500))


def d1(ok):
    b = _merge(Builder(), left_active=True, merge_active=True, out_active=True,
               left_type=UA if ok else None, out_type=UA)
    return b.done()


def d2(ok):
    b = Builder().act("init", K.INITIAL).act("act", K.ACTION).act("dec", K.DECISION)
    b.act("f1", K.FINAL).act("f2", K.FINAL, active=False)
    b.msg("t0", "init", "act").msg("m", "act", "dec", UA)
    return b.msg("yes", "dec", "f1", UA).msg("no", "dec", "f2", UA if ok else None, active=False).done()


def d3(ok):
    sig = TransformationSig("acknowledge", ("ShipperOffer",), UA)
    b = Builder().act("init", K.INITIAL).act("quote", K.ACTION).act("tr", K.TRANSFORMATION, owner="C", role=sig.name)
    b.act("use", K.ACTION).act("fin", K.FINAL)
    b.msg("t0", "init", "quote").msg("offer", "quote", "tr", "ShipperOffer", attrs=SHIPPER_OFFER)
    b.msg("conv", "tr", "use", UA if ok else None).msg("t1", "use", "fin")
    return b.done(catalog=(sig,))


def g1(ok):
    b = Builder().chain().act("goal", K.FINAL, owner="C", active=ok)
    b.msg("result", "act", "goal", UA, active=ok)
    return b.done(policy=PolicyConfig(goal_types=(UA,)))


# rule -> (builder, violation ids the broken twin must produce exactly)
CASES = {
    C.S1: (s1, {C.S1}), C.S2: (s2, {C.S2}), C.S3: (s3, {C.S3}),
    C.C1: (c1, {C.C1}), C.C2: (c2, {C.C2}), C.C3: (c3, {C.C3}), C.C4: (c4, {C.C4}), C.C5: (c5, {C.C5}),
    # a direct cross-fragment message necessarily breaks both boundary rules
    C.C6: (boundary, {C.C6, C.C7}), C.C7: (boundary, {C.C6, C.C7}),
    C.C8: (c8, {C.C8}), C.C9: (c9, {C.C9}), C.C10: (c10, {C.C10}), C.C11: (c11, {C.C11}),
    C.C12: (c12, {C.C12}), C.D1: (d1, {C.D1}), C.D2: (d2, {C.D2}), C.D3: (d3, {C.D3}), C.G1: (g1, {C.G1}),
}
