"""Graphviz rendering of instance graphs.

Activities become nodes grouped by owning workflow, messages become edges
labelled ``name:type:order``.  A message missing an end is drawn to or from
a small unlabeled stub so open pins stay visible.
"""

from __future__ import annotations

import json

from .model import ActivityKind, InstanceGraph

K = ActivityKind

COMPOSITION_COLOR = "blue"

_SHAPES = {
    K.INITIAL: 'shape=point, width=0.2',
    K.FINAL: 'shape=doublecircle, width=0.2, label=""',
    K.DECISION: "shape=diamond",
    K.MERGE: "shape=diamond",
    K.FORK: 'shape=rect, height=0.08, width=0.6, style=filled, fillcolor=black, label=""',
    K.JOIN: 'shape=rect, height=0.08, width=0.6, style=filled, fillcolor=black, label=""',
    K.TRANSFORMATION: "shape=ellipse",
    K.ACTION: "shape=box",
    K.EXTERNAL_SIGNAL: "shape=box",
}


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _node_attrs(graph: InstanceGraph, a) -> str:
    attrs = _SHAPES[a.kind]
    if "label=" not in attrs:
        label = a.name if a.role is None else f"{a.name}\\n[{a.role}]"
        attrs += f", label={_q(label)}"
    if a.active is False:
        attrs = attrs.replace("style=filled", "style=\"filled,dashed\"") if "style=" in attrs \
            else attrs + ", style=dashed"
    if a.owner == graph.composition:
        attrs += f", color={COMPOSITION_COLOR}"
    return attrs


def emit_dot(graph: InstanceGraph, name: str = "workflow") -> str:
    out = [f"digraph {_q(name)} {{", "  rankdir=LR;", '  node [fontname="Helvetica"];',
           '  edge [fontname="Helvetica", fontsize=10];']
    for w in sorted(graph.workflows.values(), key=lambda w: w.id):
        members = sorted((a for a in graph.activities.values() if a.owner == w.id), key=lambda a: a.id)
        if not members:
            continue
        out.append(f"  subgraph cluster_{w.id.serial} {{")
        out.append(f"    label={_q(w.name)};")
        if w.is_composition:
            out.append(f"    color={COMPOSITION_COLOR};")
        for a in members:
            out.append(f"    a{a.id.serial} [{_node_attrs(graph, a)}];")
        out.append("  }")
    for m in sorted(graph.messages.values(), key=lambda m: m.id):
        src = f"a{m.producer.serial}" if m.producer is not None else f"m{m.id.serial}_src"
        dst = f"a{m.consumer.serial}" if m.consumer is not None else f"m{m.id.serial}_dst"
        for stub in (s for s in (src, dst) if s.startswith("m")):
            out.append(f'  {stub} [shape=none, label="", width=0.1, height=0.1];')
        label = f"{m.name}:{m.data_type or '-'}:{m.order}"
        attrs = f"label={_q(label)}"
        if m.active is False:
            attrs += ", style=dashed"
        owners = {graph.owner_of(m.producer), graph.owner_of(m.consumer)} - {None}
        if m.added or owners == {graph.composition}:
            attrs += f", color={COMPOSITION_COLOR}"
        out.append(f"  {src} -> {dst} [{attrs}];")
    out.append("}")
    return "\n".join(out) + "\n"
