"""Contact trees (Kuo-Lu trees) of a set of Puiseux roots."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .puiseux import INF


class NoSuchBar(LookupError):
    """An arc does not leave the tree from a bar at its contact height."""


def fmt_q(q) -> str:
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class LeafNode:
    index: int
    label: str = ""
    ramification: int = 1
    multiplicity: int = 1
    parent: "Bar | None" = None

    def leaves(self) -> list[int]:
        return [self.index]


@dataclass
class Bar:
    height: Fraction
    children: list = field(default_factory=list)
    parent: "Bar | None" = None
    id: int = -1
    name: str = ""

    def leaves(self) -> list[int]:
        out: list[int] = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def depth(self) -> int:
        d, b = 0, self.parent
        while b is not None:
            d, b = d + 1, b.parent
        return d

    def __repr__(self):
        return f"Bar({self.name}, h={fmt_q(self.height)}, leaves={self.leaves()})"

    # bars are identified by position, never merged by value
    __hash__ = object.__hash__

    def __eq__(self, o):
        return self is o


class KuoLuTree:
    """Dendrogram of roots by contact order; bars carry heights."""

    def __init__(self, root, leaves: list[LeafNode]):
        self.root = root
        self.leaf_nodes = leaves
        self.bars: list[Bar] = []
        self._number()

    @staticmethod
    def build(n: int, contact: Callable[[int, int], object], labels: Sequence[str] | None = None,
              ramification: Sequence[int] | None = None,
              multiplicity: Sequence[int] | None = None) -> "KuoLuTree":
        leaves = [LeafNode(i, labels[i] if labels else f"z{i + 1}",
                           ramification[i] if ramification else 1,
                           multiplicity[i] if multiplicity else 1) for i in range(n)]
        if n == 0:
            return KuoLuTree(None, leaves)
        table = {}
        for i in range(n):
            for j in range(i + 1, n):
                c = contact(i, j)
                table[i, j] = table[j, i] = c if c == INF else Fraction(c)

        def grow(ids: list[int], parent):
            if len(ids) == 1:
                node = leaves[ids[0]]
                node.parent = parent
                return node
            h = min(table[i, j] for i in ids for j in ids if i < j)
            bar = Bar(h, parent=parent)
            groups: list[list[int]] = []
            for i in ids:
                for g in groups:
                    if table[i, g[0]] > h:
                        g.append(i)
                        break
                else:
                    groups.append([i])
            bar.children = [grow(g, bar) for g in groups]
            return bar

        return KuoLuTree(grow(list(range(n)), None), leaves)

    def _number(self):
        """Name bars in canonical order: by height, then by canonical subtree code."""
        self.bars = []
        if self.root is None:
            return
        self._sort_children(self.root)
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Bar):
                self.bars.append(node)
                stack.extend(reversed(node.children))
        order = sorted(self.bars, key=lambda b: (b.height, b.depth(), self._code(b)))
        for k, b in enumerate(order):
            b.id = k
            b.name = f"B{k + 1}"
        self.bars = order

    def _sort_children(self, node):
        if isinstance(node, Bar):
            for c in node.children:
                self._sort_children(c)
            node.children.sort(key=lambda c: (self._height(c), self._code(c)))

    @staticmethod
    def _height(node):
        return node.height if isinstance(node, Bar) else INF

    def _code(self, node, decorations: dict | None = None) -> str:
        if isinstance(node, LeafNode):
            return f"L(N={node.ramification},m={node.multiplicity})"
        parts = sorted((self._height(c), self._code(c, decorations)) for c in node.children)
        dec = ""
        if decorations and node in decorations:
            dec = "{" + decorations[node] + "}"
        return f"B[{fmt_q(node.height)}{dec}](" + ",".join(p[1] for p in parts) + ")"

    def canonical_encoding(self, decorations: dict | None = None) -> str:
        """Isomorphism-invariant string; ``decorations`` maps bars to text."""
        if self.root is None:
            return "empty"
        return self._code(self.root, decorations)

    def bar_path(self, bar: Bar) -> tuple[str, ...]:
        """Subtree codes from the root down to ``bar``; a position-level identifier."""
        path = []
        node = bar
        while node is not None:
            path.append(self._code(node))
            node = node.parent
        return tuple(reversed(path))

    def lca(self, ids: Sequence[int]):
        paths = []
        for i in ids:
            node, p = self.leaf_nodes[i], []
            while node is not None:
                p.append(node)
                node = node.parent
            paths.append(list(reversed(p)))
        common = None
        for level in zip(*paths):
            if all(x is level[0] for x in level):
                common = level[0]
            else:
                break
        return common

    def bar_of(self, contacts: Sequence) -> Bar:
        """Bar from which an arc with the given contacts to the leaves grows."""
        delta = max(contacts)
        ids = [i for i, c in enumerate(contacts) if c == delta]
        node = self.lca(ids)
        if not isinstance(node, Bar) or node.height != delta:
            raise NoSuchBar(f"no bar at height {fmt_q(delta)} for this arc")
        return node

    def heights(self) -> list[Fraction]:
        return sorted(b.height for b in self.bars)

    def to_dot(self, decorations: dict | None = None) -> str:
        lines = ["digraph kuo_lu {", "  node [shape=box];"]
        for b in sorted(self.bars, key=lambda b: b.id):
            extra = f"\\n{decorations[b]}" if decorations and b in decorations else ""
            lines.append(f'  {b.name} [label="{b.name} h={fmt_q(b.height)}{extra}"];')
        for leaf in self.leaf_nodes:
            lines.append(f'  leaf{leaf.index} [shape=ellipse,label="{leaf.label}"];')
        for b in sorted(self.bars, key=lambda b: b.id):
            for c in b.children:
                target = c.name if isinstance(c, Bar) else f"leaf{c.index}"
                lines.append(f"  {b.name} -> {target};")
        lines.append("}")
        return "\n".join(lines)

    def to_ascii(self, decorations: dict | None = None) -> str:
        if self.root is None:
            return "(empty)"
        out: list[str] = []

        def walk(node, indent):
            pad = "  " * indent
            if isinstance(node, Bar):
                extra = f"  {decorations[node]}" if decorations and node in decorations else ""
                out.append(f"{pad}{node.name} h={fmt_q(node.height)}{extra}")
                for c in node.children:
                    walk(c, indent + 1)
            else:
                mult = f" x{node.multiplicity}" if node.multiplicity > 1 else ""
                out.append(f"{pad}- {node.label}{mult}")

        walk(self.root, 0)
        return "\n".join(out)
