"""Line-oriented scripting language for Lefschetz data.

Statements:

    fiber <name> = ak <m> n=<int>
    fiber <name> = plumbing a<k> n=<int>
    datum <name> over <fiber> = [ <cycle> (, <cycle>)* ]
    datum <name> = preset <preset-name>
    script <name> on <target> { <step>; ... }
    print invariants <name>
    verify <script-name>
    search <name> depth=<d> width=<w>

Cycle expressions are basis labels (``e1``), twists of another cycle
expression (``tw(e2)^2 e1``; the exponent may be negative, never zero),
or catalogue arcs (``arc(2,3; a2)``).  Script steps: ``hurwitzL i``,
``hurwitzR i``, ``rotate``, ``stabilize [ints]``, ``subflex [[ints]|none,
...]``, ``bsum <datum>``, ``certify-loose i``, ``flexify``.  A script's
resulting datum is registered under the script's name, so scripts chain.
``#`` starts a comment.  Parsing only checks names and syntax; building
and running happen in the cli module.
"""

import difflib
import re
from collections import namedtuple

from .presets import PRESETS


class DslError(ValueError):
    """A syntax or name error, carrying its source position."""

    def __init__(self, message, line, column, **context):
        super().__init__("line %d, column %d: %s" % (line, column, message))
        self.line = line
        self.column = column
        self.context = dict(context)


_Token = namedtuple("_Token", ("kind", "value", "line", "column"))

_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)"
    r"|(?P<comment>#.*)"
    r"|(?P<int>-?\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_-]*)"
    r"|(?P<sym>[][=(){},;^])"
)

_STATEMENTS = ("fiber", "datum", "script", "print", "verify", "search")
_STEPS = ("hurwitzL", "hurwitzR", "rotate", "stabilize", "subflex",
          "bsum", "certify-loose", "flexify")


def _tokenize(text):
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        pos = 0
        while pos < len(raw):
            m = _TOKEN.match(raw, pos)
            if m is None:
                raise DslError("unexpected character %r" % raw[pos],
                               lineno, pos + 1)
            kind = m.lastgroup
            if kind == "int":
                tokens.append(_Token("int", int(m.group()), lineno, pos + 1))
            elif kind == "name":
                tokens.append(_Token("name", m.group(), lineno, pos + 1))
            elif kind == "sym":
                tokens.append(_Token(m.group(), m.group(), lineno, pos + 1))
            pos = m.end()
        tokens.append(_Token("nl", None, lineno, len(raw) + 1))
    return tokens


def _suggest(name, candidates):
    close = difflib.get_close_matches(name, sorted(candidates), 1)
    if close:
        return " (did you mean %r?)" % close[0]
    return ""


class Workspace:
    """Parsed definitions and commands, in source order.

    ``definitions`` holds (kind, name, payload) triples and ``commands``
    holds command tuples; both are plain data, nothing is built yet.
    Equality ignores source locations, so pretty-printed round trips
    compare equal.
    """

    __slots__ = ("definitions", "commands", "def_lines", "cmd_lines")

    def __init__(self, definitions, commands, def_lines, cmd_lines):
        object.__setattr__(self, "definitions", tuple(definitions))
        object.__setattr__(self, "commands", tuple(commands))
        object.__setattr__(self, "def_lines", tuple(def_lines))
        object.__setattr__(self, "cmd_lines", tuple(cmd_lines))

    def __setattr__(self, name, value):
        raise AttributeError("Workspace is immutable")

    def _key(self):
        return (self.definitions, self.commands)

    def __eq__(self, other):
        if not isinstance(other, Workspace):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "Workspace(%d definitions, %d commands)" % (
            len(self.definitions), len(self.commands))


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.kinds = {}
        self.definitions = []
        self.commands = []
        self.def_lines = []
        self.cmd_lines = []

    # --- token helpers -------------------------------------------------

    def _peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        last = self.tokens[-1] if self.tokens else _Token("nl", None, 1, 1)
        return _Token("eof", None, last.line, last.column)

    def _next(self):
        tok = self._peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _skip_newlines(self):
        while self._peek().kind == "nl":
            self.pos += 1

    def _expect(self, kind, what):
        tok = self._next()
        if tok.kind != kind:
            raise DslError("expected %s" % what, tok.line, tok.column,
                           got=tok.value)
        return tok

    def _expect_word(self, word):
        tok = self._next()
        if tok.kind != "name" or tok.value != word:
            raise DslError("expected %r" % word, tok.line, tok.column,
                           got=tok.value)
        return tok

    def _end_statement(self):
        tok = self._peek()
        if tok.kind not in ("nl", "eof"):
            raise DslError("unexpected trailing input", tok.line, tok.column,
                           got=tok.value)

    # --- name bookkeeping ----------------------------------------------

    def _define(self, tok):
        if tok.value in self.kinds:
            raise DslError("name %r is already defined" % tok.value,
                           tok.line, tok.column)
        return tok.value

    def _reference(self, tok, kinds, what):
        name = tok.value
        if self.kinds.get(name) not in kinds:
            known = [n for n, k in self.kinds.items() if k in kinds]
            raise DslError(
                "unknown %s %r%s" % (what, name, _suggest(name, known)),
                tok.line, tok.column)
        return name

    # --- statements ------------------------------------------------------

    def parse(self):
        while True:
            self._skip_newlines()
            tok = self._peek()
            if tok.kind == "eof":
                break
            if tok.kind != "name" or tok.value not in _STATEMENTS:
                raise DslError(
                    "unknown statement %r%s"
                    % (tok.value, _suggest(str(tok.value), _STATEMENTS)),
                    tok.line, tok.column)
            getattr(self, "_parse_" + tok.value)()
        return Workspace(self.definitions, self.commands,
                         self.def_lines, self.cmd_lines)

    def _parse_fiber(self):
        head = self._next()
        name_tok = self._expect("name", "a fiber name")
        name = self._define(name_tok)
        self._expect("=", "'='")
        kind_tok = self._expect("name", "'ak' or 'plumbing'")
        if kind_tok.value == "ak":
            m = self._expect("int", "the number of marked points").value
            payload = ("ak", m, self._parse_dimension())
        elif kind_tok.value == "plumbing":
            tree_tok = self._expect("name", "a plumbing tree")
            match = re.fullmatch(r"a(\d+)", tree_tok.value)
            if match is None:
                raise DslError(
                    "only the path shorthand a<k> is built in",
                    tree_tok.line, tree_tok.column, got=tree_tok.value)
            payload = ("plumbing", int(match.group(1)),
                       self._parse_dimension())
        else:
            raise DslError(
                "expected 'ak' or 'plumbing'%s"
                % _suggest(kind_tok.value, ("ak", "plumbing")),
                kind_tok.line, kind_tok.column)
        self._end_statement()
        self.kinds[name] = "fiber"
        self.definitions.append(("fiber", name, payload))
        self.def_lines.append(head.line)

    def _parse_dimension(self):
        self._expect_word("n")
        self._expect("=", "'='")
        return self._expect("int", "the fiber dimension").value

    def _parse_datum(self):
        head = self._next()
        name_tok = self._expect("name", "a datum name")
        name = self._define(name_tok)
        tok = self._next()
        if tok.kind == "name" and tok.value == "over":
            fiber_tok = self._expect("name", "a fiber name")
            fiber = self._reference(fiber_tok, ("fiber",), "fiber")
            self._expect("=", "'='")
            self._expect("[", "'['")
            cycles = []
            if self._peek().kind != "]":
                cycles.append(self._parse_cycle())
                while self._peek().kind == ",":
                    self._next()
                    cycles.append(self._parse_cycle())
            self._expect("]", "']' or ','")
            payload = ("cycles", fiber, tuple(cycles))
        elif tok.kind == "=":
            self._expect_word("preset")
            preset_tok = self._expect("name", "a preset name")
            if preset_tok.value not in PRESETS:
                raise DslError(
                    "unknown preset %r%s"
                    % (preset_tok.value, _suggest(preset_tok.value, PRESETS)),
                    preset_tok.line, preset_tok.column)
            payload = ("preset", preset_tok.value)
        else:
            raise DslError("expected 'over' or '='", tok.line, tok.column,
                           got=tok.value)
        self._end_statement()
        self.kinds[name] = "datum"
        self.definitions.append(("datum", name, payload))
        self.def_lines.append(head.line)

    def _parse_cycle(self):
        tok = self._next()
        if tok.kind != "name":
            raise DslError("expected a cycle expression", tok.line,
                           tok.column, got=tok.value)
        if tok.value == "tw":
            self._expect("(", "'('")
            sphere = self._expect("name", "a basis sphere").value
            self._expect(")", "')'")
            self._expect("^", "'^'")
            exp_tok = self._expect("int", "a twist exponent")
            if exp_tok.value == 0:
                raise DslError("zero twist exponent is not allowed",
                               exp_tok.line, exp_tok.column)
            return ("tw", sphere, exp_tok.value, self._parse_cycle())
        if tok.value == "arc":
            self._expect("(", "'('")
            i = self._expect("int", "an endpoint").value
            self._expect(",", "','")
            j = self._expect("int", "an endpoint").value
            self._expect(";", "';'")
            label = self._expect("name", "a catalogue arc name").value
            self._expect(")", "')'")
            return ("arc", i, j, label)
        return ("basis", tok.value)

    def _parse_script(self):
        head = self._next()
        name_tok = self._expect("name", "a script name")
        name = self._define(name_tok)
        self._expect_word("on")
        target_tok = self._expect("name", "a datum name")
        target = self._reference(target_tok, ("datum", "script"), "datum")
        self._expect("{", "'{'")
        steps = []
        while True:
            self._skip_newlines()
            tok = self._peek()
            if tok.kind == "}":
                self._next()
                break
            if tok.kind == "eof":
                raise DslError("unterminated script (missing '}')",
                               head.line, head.column)
            steps.append(self._parse_step())
            if self._peek().kind == ";":
                self._next()
        self._end_statement()
        self.kinds[name] = "script"
        self.definitions.append(("script", name, (target, tuple(steps))))
        self.def_lines.append(head.line)

    def _parse_step(self):
        tok = self._next()
        if tok.kind != "name" or tok.value not in _STEPS:
            raise DslError(
                "unknown script step %r%s"
                % (tok.value, _suggest(str(tok.value), _STEPS)),
                tok.line, tok.column)
        word = tok.value
        if word in ("hurwitzL", "hurwitzR", "certify-loose"):
            pos_tok = self._expect("int", "a cycle position")
            if pos_tok.value < 1:
                raise DslError("positions are 1-based", pos_tok.line,
                               pos_tok.column, got=pos_tok.value)
            return (word, pos_tok.value)
        if word in ("rotate", "flexify"):
            return (word,)
        if word == "stabilize":
            return ("stabilize", self._parse_int_list())
        if word == "subflex":
            self._expect("[", "'['")
            entries = []
            if self._peek().kind != "]":
                entries.append(self._parse_subflex_entry())
                while self._peek().kind == ",":
                    self._next()
                    entries.append(self._parse_subflex_entry())
            self._expect("]", "']' or ','")
            return ("subflex", tuple(entries))
        bsum_tok = self._expect("name", "a datum name")
        return ("bsum", self._reference(bsum_tok, ("datum", "script"),
                                        "datum"))

    def _parse_int_list(self):
        self._expect("[", "'['")
        values = []
        if self._peek().kind != "]":
            values.append(self._expect("int", "an integer").value)
            while self._peek().kind == ",":
                self._next()
                values.append(self._expect("int", "an integer").value)
        self._expect("]", "']' or ','")
        return tuple(values)

    def _parse_subflex_entry(self):
        tok = self._peek()
        if tok.kind == "name" and tok.value == "none":
            self._next()
            return None
        if tok.kind == "[":
            return self._parse_int_list()
        raise DslError("expected a pairing vector or 'none'",
                       tok.line, tok.column, got=tok.value)

    def _parse_print(self):
        head = self._next()
        self._expect_word("invariants")
        name_tok = self._expect("name", "a datum name")
        name = self._reference(name_tok, ("datum", "script"), "datum")
        self._end_statement()
        self.commands.append(("print_invariants", name))
        self.cmd_lines.append(head.line)

    def _parse_verify(self):
        head = self._next()
        name_tok = self._expect("name", "a script name")
        name = self._reference(name_tok, ("script",), "script")
        self._end_statement()
        self.commands.append(("verify", name))
        self.cmd_lines.append(head.line)

    def _parse_search(self):
        head = self._next()
        name_tok = self._expect("name", "a datum name")
        name = self._reference(name_tok, ("datum", "script"), "datum")
        depth = width = None
        for key in ("depth", "width"):
            tok = self._peek()
            if tok.kind == "name" and tok.value == key:
                self._next()
                self._expect("=", "'='")
                value = self._expect("int", "an integer").value
                if key == "depth":
                    depth = value
                else:
                    width = value
        self._end_statement()
        self.commands.append(("search", name, depth, width))
        self.cmd_lines.append(head.line)


def parse(text):
    """Parse script text into a Workspace (no building, no running)."""
    return _Parser(text).parse()


# --- pretty printer -----------------------------------------------------


def _cycle_text(ast):
    if ast[0] == "basis":
        return ast[1]
    if ast[0] == "tw":
        return "tw(%s)^%d %s" % (ast[1], ast[2], _cycle_text(ast[3]))
    return "arc(%d,%d; %s)" % (ast[1], ast[2], ast[3])


def _int_list_text(values):
    return "[%s]" % ", ".join(str(v) for v in values)


def _step_text(ast):
    word = ast[0]
    if word in ("hurwitzL", "hurwitzR", "certify-loose"):
        return "%s %d" % (word, ast[1])
    if word in ("rotate", "flexify"):
        return word
    if word == "stabilize":
        return "stabilize %s" % _int_list_text(ast[1])
    if word == "subflex":
        parts = ["none" if p is None else _int_list_text(p) for p in ast[1]]
        return "subflex [%s]" % ", ".join(parts)
    return "bsum %s" % ast[1]


def _command_text(cmd):
    if cmd[0] == "print_invariants":
        return "print invariants %s" % cmd[1]
    if cmd[0] == "verify":
        return "verify %s" % cmd[1]
    text = "search %s" % cmd[1]
    if cmd[2] is not None:
        text += " depth=%d" % cmd[2]
    if cmd[3] is not None:
        text += " width=%d" % cmd[3]
    return text


def pretty_print(workspace):
    """Canonical text whose parse equals the workspace."""
    lines = []
    for kind, name, payload in workspace.definitions:
        if kind == "fiber":
            shape, size, n = payload
            shape_text = "ak %d" % size if shape == "ak" else "plumbing a%d" % size
            lines.append("fiber %s = %s n=%d" % (name, shape_text, n))
        elif kind == "datum":
            if payload[0] == "preset":
                lines.append("datum %s = preset %s" % (name, payload[1]))
            else:
                body = ", ".join(_cycle_text(c) for c in payload[2])
                lines.append("datum %s over %s = [%s]"
                             % (name, payload[1], body))
        else:
            target, steps = payload
            lines.append("script %s on %s {" % (name, target))
            for step in steps:
                lines.append("  %s;" % _step_text(step))
            lines.append("}")
    for cmd in workspace.commands:
        lines.append(_command_text(cmd))
    return "".join(line + "\n" for line in lines)
