"""Lightweight structural scanner for Java source.

This is not a full parser. It tokenizes a compilation unit, matches braces,
and recovers just enough structure for the rest of the package: type and
method declarations with their source spans, catch blocks, branch bodies
(if / else / switch-case), and receiver-qualified call sites. It is lenient
by design: unknown constructs are skipped token by token, and a file is only
marked unparseable when braces or literals do not close at all.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

# Words that can never be a method name or a call receiver segment.
_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public record return sealed short static strictfp super switch
    synchronized this throw throws transient try var void volatile while
    yield permits""".split()
)

_TYPE_KEYWORDS = frozenset({"class", "interface", "enum", "record"})


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | char | punct
    text: str
    start: int  # offset into the decoded source
    end: int
    line: int  # 1-based


@dataclass(frozen=True)
class MethodDecl:
    type_name: str  # enclosing type, dotted for nested classes
    name: str
    params: tuple[str, ...]  # normalized textual parameter types
    decl_start: int  # first token of the member, annotations included
    decl_line: int
    body_start: int  # offset of '{', -1 for abstract declarations
    body_end: int  # offset just past the matching '}', -1 if bodiless
    end_line: int
    is_ctor: bool = False

    @property
    def signature(self) -> str:
        return f"{self.type_name}.{self.name}({','.join(self.params)})"

    @property
    def has_body(self) -> bool:
        return self.body_start >= 0

    def contains(self, offset: int) -> bool:
        return self.has_body and self.decl_start <= offset < self.body_end


@dataclass(frozen=True)
class BranchRegion:
    kind: str  # if | else | case
    condition: str  # raw condition text, '' for else
    body_start: int
    body_end: int
    first_stmt: int  # offset of the first statement in the body, -1 if empty


@dataclass(frozen=True)
class CatchRegion:
    start: int  # offset of the catch block '{'
    end: int  # offset just past the matching '}'


@dataclass(frozen=True)
class CallSite:
    receiver: str  # dotted receiver chain as written ('this.logger', 'LOG')
    name: str  # invoked method name
    name_start: int
    name_end: int
    span: tuple[int, int]  # receiver start .. closing paren
    args: tuple[tuple[Token, ...], ...]  # top-level comma-split argument tokens
    line: int  # 1-based line of the receiver


@dataclass(frozen=True)
class TypeDecl:
    name: str  # qualified within the file (Outer.Inner)
    supertypes: tuple[str, ...]  # extends/implements names as written


@dataclass
class JavaFile:
    path: str
    source: str
    ok: bool
    tokens: list[Token] = field(default_factory=list)
    methods: list[MethodDecl] = field(default_factory=list)
    branches: list[BranchRegion] = field(default_factory=list)
    catches: list[CatchRegion] = field(default_factory=list)
    calls: list[CallSite] = field(default_factory=list)
    types: list[TypeDecl] = field(default_factory=list)
    _line_starts: list[int] = field(default_factory=list)

    def line_of(self, offset: int) -> int:
        return bisect.bisect_right(self._line_starts, offset)

    def method_at(self, offset: int) -> MethodDecl | None:
        """Innermost method whose declaration-to-body span contains offset."""
        best = None
        for m in self.methods:
            if m.contains(offset):
                if best is None or (m.body_end - m.decl_start) < (best.body_end - best.decl_start):
                    best = m
        return best

    def branch_at(self, offset: int) -> BranchRegion | None:
        best = None
        for b in self.branches:
            if b.body_start <= offset < b.body_end:
                if best is None or (b.body_end - b.body_start) < (best.body_end - best.body_start):
                    best = b
        return best

    def in_catch(self, offset: int) -> bool:
        return any(c.start <= offset < c.end for c in self.catches)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------


def lex(source: str) -> tuple[list[Token], bool]:
    """Tokenize, dropping whitespace and comments.

    Returns (tokens, clean) where clean is False when a comment or literal
    runs off the end of the file.
    """
    toks: list[Token] = []
    n = len(source)
    i = 0
    line = 1
    clean = True
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r\f\v":
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            nxt = source[i + 1]
            if nxt == "/":
                j = source.find("\n", i)
                i = n if j < 0 else j
                continue
            if nxt == "*":
                j = source.find("*/", i + 2)
                if j < 0:
                    clean = False
                    i = n
                else:
                    line += source.count("\n", i, j)
                    i = j + 2
                continue
        if ch == '"':
            if source.startswith('"""', i):
                j = source.find('"""', i + 3)
                if j < 0:
                    clean = False
                    j = n - 3
                end = j + 3
            else:
                j = i + 1
                while j < n and source[j] != '"':
                    if source[j] == "\\":
                        j += 1
                    elif source[j] == "\n":
                        break  # unterminated on this line; stop the literal
                    j += 1
                if j >= n or source[j] != '"':
                    clean = False
                end = min(j + 1, n)
            toks.append(Token("string", source[i:end], i, end, line))
            line += source.count("\n", i, end)
            i = end
            continue
        if ch == "'":
            j = i + 1
            while j < n and source[j] != "'":
                if source[j] == "\\":
                    j += 1
                j += 1
            end = min(j + 1, n)
            if j >= n:
                clean = False
            toks.append(Token("char", source[i:end], i, end, line))
            i = end
            continue
        if ch.isalpha() or ch == "_" or ch == "$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            toks.append(Token("ident", source[i:j], i, j, line))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "._"):
                # consume exponent signs glued to e/E/p/P
                if source[j] in "+-" :
                    break
                j += 1
            while j < n and source[j] in "+-" and source[j - 1] in "eEpP":
                j += 1
                while j < n and (source[j].isalnum() or source[j] in "._"):
                    j += 1
            toks.append(Token("number", source[i:j], i, j, line))
            i = j
            continue
        toks.append(Token("punct", ch, i, i + 1, line))
        i += 1
    return toks, clean


# ---------------------------------------------------------------------------
# Structural scan
# ---------------------------------------------------------------------------


class _Scanner:
    def __init__(self, path: str, source: str, tokens: list[Token]):
        self.path = path
        self.source = source
        self.toks = tokens
        self.n = len(tokens)
        self.methods: list[MethodDecl] = []
        self.branches: list[BranchRegion] = []
        self.catches: list[CatchRegion] = []
        self.types: list[TypeDecl] = []
        self.truncated = False

    # -- small helpers ------------------------------------------------------

    def _text(self, i: int) -> str:
        return self.toks[i].text if 0 <= i < self.n else ""

    def _skip_annotation(self, i: int) -> int:
        # at '@': @Name, @a.b.Name, optionally with an argument list
        i += 1
        while i + 1 < self.n and self._text(i + 1) == "." and self.toks[i].kind == "ident":
            i += 2
        if i < self.n and self.toks[i].kind == "ident":
            i += 1
        if self._text(i) == "(":
            i = self._skip_balanced(i, "(", ")")
        return i

    def _skip_balanced(self, i: int, opener: str, closer: str) -> int:
        """From an opener token, return the index just past its closer."""
        depth = 0
        while i < self.n:
            t = self._text(i)
            if t == opener:
                depth += 1
            elif t == closer:
                depth -= 1
                if depth == 0:
                    return i + 1
            i += 1
        self.truncated = True
        return self.n

    def _match_index(self, i: int, opener: str, closer: str) -> int:
        """Index of the closing token itself."""
        j = self._skip_balanced(i, opener, closer)
        return j - 1

    # -- declarations -------------------------------------------------------

    def scan(self) -> None:
        i = 0
        while i < self.n:
            t = self.toks[i]
            if t.text == "@":
                i = self._skip_annotation(i)
            elif t.text in _TYPE_KEYWORDS and self.toks[min(i + 1, self.n - 1)].kind == "ident":
                i = self._type_decl(i, prefix="")
            else:
                i += 1

    def _type_decl(self, i: int, prefix: str) -> int:
        kind = self._text(i)
        name = self._text(i + 1)
        qualified = f"{prefix}.{name}" if prefix else name
        supers: list[str] = []
        j = i + 2
        collecting = False
        angle = 0
        while j < self.n:
            t = self._text(j)
            if t == "<":
                angle += 1
            elif t == ">":
                angle = max(0, angle - 1)
            elif t == "(" and angle == 0:
                j = self._skip_balanced(j, "(", ")")  # record header
                continue
            elif angle == 0 and t in ("extends", "implements"):
                collecting = True
            elif angle == 0 and t == "permits":
                collecting = False
            elif angle == 0 and t == "{":
                break
            elif collecting and angle == 0 and self.toks[j].kind == "ident":
                # append dotted names, one entry per comma-separated name
                if supers and self._text(j - 1) == ".":
                    supers[-1] += "." + t
                else:
                    supers.append(t)
            j += 1
        self.types.append(TypeDecl(qualified, tuple(supers)))
        if j >= self.n:
            self.truncated = True
            return self.n
        return self._type_body(j, qualified, kind)

    def _type_body(self, i: int, qualified: str, kind: str) -> int:
        j = i + 1
        if kind == "enum":
            # constants first: idents with optional argument lists and bodies,
            # terminated by ';' or the end of the type body
            while j < self.n:
                t = self._text(j)
                if t == ";":
                    j += 1
                    break
                if t == "}":
                    return j + 1
                if t == "(":
                    j = self._skip_balanced(j, "(", ")")
                    continue
                if t == "{":
                    j = self._skip_balanced(j, "{", "}")
                    continue
                j += 1
        while j < self.n:
            t = self._text(j)
            if t == "}":
                return j + 1
            if t == "@":
                j = self._skip_annotation(j)
                continue
            if t in _TYPE_KEYWORDS and self.toks[min(j + 1, self.n - 1)].kind == "ident":
                j = self._type_decl(j, prefix=qualified)
                continue
            if t == "{":  # instance or static initializer body
                j = self._block(j)
                continue
            if t == ";":
                j += 1
                continue
            if t == "static" and self._text(j + 1) == "{":
                j = self._block(j + 1)
                continue
            j = self._member(j, qualified)
        self.truncated = True
        return self.n

    def _member(self, i: int, qualified: str) -> int:
        """One field or method declaration starting at token i."""
        decl_tok = self.toks[i]
        j = i
        angle = 0
        while j < self.n:
            t = self._text(j)
            if t == "@":
                j = self._skip_annotation(j)
                continue
            if t == "<":
                angle += 1
            elif t == ">":
                angle = max(0, angle - 1)
            elif angle == 0 and t in _TYPE_KEYWORDS and self.toks[min(j + 1, self.n - 1)].kind == "ident":
                return self._type_decl(j, prefix=qualified)  # modifiers preceded the keyword
            elif angle == 0 and t == "=":
                return self._skip_to_semi(j)
            elif angle == 0 and t == ";":
                return j + 1
            elif angle == 0 and t == "}":
                return j  # recovery: let the caller close the type body
            elif angle == 0 and t == "(":
                name_tok = self.toks[j - 1] if j > i else None
                if name_tok is None or name_tok.kind != "ident" or name_tok.text in _KEYWORDS:
                    return self._skip_to_semi(j)
                params, close = self._parse_params(j)
                k = close + 1
                while k < self.n and self._text(k) not in ("{", ";", "}"):
                    if self._text(k) == "@":
                        k = self._skip_annotation(k)
                        continue
                    if self._text(k) == "(":  # annotation member default values etc.
                        k = self._skip_balanced(k, "(", ")")
                        continue
                    k += 1
                simple = qualified.rsplit(".", 1)[-1]
                is_ctor = name_tok.text == simple
                if k < self.n and self._text(k) == "{":
                    end = self._block(k)
                    close_tok = self.toks[end - 1]
                    self.methods.append(
                        MethodDecl(
                            type_name=qualified,
                            name=name_tok.text,
                            params=params,
                            decl_start=decl_tok.start,
                            decl_line=decl_tok.line,
                            body_start=self.toks[k].start,
                            body_end=close_tok.end,
                            end_line=close_tok.line,
                            is_ctor=is_ctor,
                        )
                    )
                    return end
                # abstract / interface / native declaration, no body
                self.methods.append(
                    MethodDecl(
                        type_name=qualified,
                        name=name_tok.text,
                        params=params,
                        decl_start=decl_tok.start,
                        decl_line=decl_tok.line,
                        body_start=-1,
                        body_end=-1,
                        end_line=decl_tok.line,
                        is_ctor=is_ctor,
                    )
                )
                return k + 1 if k < self.n else self.n
            j += 1
        self.truncated = True
        return self.n

    def _parse_params(self, i: int) -> tuple[tuple[str, ...], int]:
        """Parse a parameter list from '(' at i; returns (types, index of ')')."""
        close = self._match_index(i, "(", ")")
        groups: list[list[Token]] = [[]]
        depth = 0
        angle = 0
        for k in range(i + 1, close):
            t = self.toks[k]
            if t.text in "([":
                depth += 1
            elif t.text in ")]":
                depth -= 1
            elif t.text == "<":
                angle += 1
            elif t.text == ">":
                angle = max(0, angle - 1)
            elif t.text == "," and depth == 0 and angle == 0:
                groups.append([])
                continue
            groups[-1].append(t)
        params: list[str] = []
        for group in groups:
            toks = self._strip_param_noise(group)
            if not toks:
                continue
            last_ident = max(
                (k for k, t in enumerate(toks) if t.kind == "ident" and t.text not in _KEYWORDS),
                default=-1,
            )
            if last_ident >= 0 and len(toks) > 1:
                toks = toks[:last_ident] + toks[last_ident + 1 :]
            params.append("".join(t.text for t in toks))
        return tuple(params), close

    @staticmethod
    def _strip_param_noise(group: list[Token]) -> list[Token]:
        out: list[Token] = []
        i = 0
        n = len(group)
        while i < n:
            t = group[i]
            if t.text == "@":
                # annotation name (possibly dotted), then an optional argument list
                i += 1
                while i < n and group[i].kind == "ident":
                    if i + 1 < n and group[i + 1].text == ".":
                        i += 2
                    else:
                        i += 1
                        break
                if i < n and group[i].text == "(":
                    depth = 0
                    while i < n:
                        if group[i].text == "(":
                            depth += 1
                        elif group[i].text == ")":
                            depth -= 1
                            if depth == 0:
                                i += 1
                                break
                        i += 1
                continue
            if t.text == "final":
                i += 1
                continue
            out.append(t)
            i += 1
        return out

    # -- statements ---------------------------------------------------------

    def _block(self, i: int) -> int:
        """Parse a '{...}' block, recording regions found inside."""
        j = i + 1
        while j < self.n:
            if self._text(j) == "}":
                return j + 1
            j = self._statement(j)
        self.truncated = True
        return self.n

    def _statement(self, j: int) -> int:
        t = self._text(j)
        if t == "{":
            return self._block(j)
        if t == "if":
            return self._if(j)
        if t == "switch":
            return self._switch(j)
        if t == "try":
            return self._try(j)
        if t in ("for", "while", "synchronized"):
            j += 1
            if self._text(j) == "(":
                j = self._skip_balanced(j, "(", ")")
            return self._statement(j)
        if t == "do":
            j = self._statement(j + 1)
            if self._text(j) == "while":
                j += 1
                if self._text(j) == "(":
                    j = self._skip_balanced(j, "(", ")")
                if self._text(j) == ";":
                    j += 1
            return j
        if t in _TYPE_KEYWORDS and self.toks[min(j + 1, self.n - 1)].kind == "ident":
            return self._type_decl(j, prefix="")  # local class; registered standalone
        if t == ";":
            return j + 1
        if t == "else":  # stray else, recover by parsing its body
            return self._statement(j + 1)
        return self._skip_to_semi(j)

    def _skip_to_semi(self, j: int) -> int:
        depth = 0
        while j < self.n:
            t = self._text(j)
            if t in "([":
                depth += 1
            elif t in ")]":
                depth = max(0, depth - 1)
            elif t == "{":
                j = self._block(j)
                continue
            elif t == "}" and depth == 0:
                return j  # do not consume: enclosing block ends here
            elif t == ";" and depth == 0:
                return j + 1
            j += 1
        self.truncated = True
        return self.n

    def _if(self, j: int) -> int:
        cond, after = self._condition(j + 1)
        j = self._branch_body("if", cond, after)
        if self._text(j) == "else":
            k = j + 1
            j = self._branch_body("else", "", k)
        return j

    def _condition(self, j: int) -> tuple[str, int]:
        if self._text(j) != "(":
            return "", j
        close = self._match_index(j, "(", ")")
        text = self.source[self.toks[j].end : self.toks[close].start]
        return text, close + 1

    def _branch_body(self, kind: str, cond: str, j: int) -> int:
        if j >= self.n:
            self.truncated = True
            return self.n
        if self._text(j) == "{":
            start = self.toks[j].start
            first = self.toks[j + 1].start if j + 1 < self.n and self._text(j + 1) != "}" else -1
            end_idx = self._block(j)
            end = self.toks[end_idx - 1].end if end_idx > 0 else start
            self.branches.append(BranchRegion(kind, cond, start, end, first))
            return end_idx
        start = self.toks[j].start
        end_idx = self._statement(j)
        end = self.toks[min(end_idx, self.n) - 1].end
        self.branches.append(BranchRegion(kind, cond, start, end, start))
        return end_idx

    def _switch(self, j: int) -> int:
        expr, after = self._condition(j + 1)
        if self._text(after) != "{":
            return after
        j = after + 1
        open_region: tuple[str, int] | None = None  # (label text, body start index)

        def close_region(upto: int) -> None:
            nonlocal open_region
            if open_region is None:
                return
            label, start_idx = open_region
            open_region = None
            if start_idx >= upto:
                return
            start = self.toks[start_idx].start
            end = self.toks[upto - 1].end if upto > start_idx else start
            self.branches.append(
                BranchRegion("case", f"{expr} {label}".strip(), start, end, start)
            )

        while j < self.n:
            t = self._text(j)
            if t == "}":
                close_region(j)
                return j + 1
            if t in ("case", "default"):
                close_region(j)
                label_parts: list[str] = []
                k = j + 1 if t == "case" else j
                if t == "default":
                    k = j + 1
                depth = 0
                while k < self.n:
                    tk = self._text(k)
                    if tk == "(":
                        depth += 1
                    elif tk == ")":
                        depth -= 1
                    elif depth == 0 and tk in (":",):
                        break
                    elif depth == 0 and tk == "-" and self._text(k + 1) == ">":
                        break
                    label_parts.append(tk)
                    k += 1
                label = " ".join(label_parts)
                if self._text(k) == ":":
                    open_region = (label, k + 1)
                    j = k + 1
                else:  # arrow form: body is one statement or block
                    k += 2
                    start = self.toks[k].start if k < self.n else 0
                    end_idx = self._statement(k) if k < self.n else self.n
                    end = self.toks[min(end_idx, self.n) - 1].end
                    self.branches.append(
                        BranchRegion("case", f"{expr} {label}".strip(), start, end, start)
                    )
                    j = end_idx
                continue
            j = self._statement(j)
        self.truncated = True
        return self.n

    def _try(self, j: int) -> int:
        j += 1
        if self._text(j) == "(":
            j = self._skip_balanced(j, "(", ")")
        if self._text(j) == "{":
            j = self._block(j)
        while self._text(j) in ("catch", "finally"):
            word = self._text(j)
            j += 1
            if self._text(j) == "(":
                j = self._skip_balanced(j, "(", ")")
            if self._text(j) == "{":
                start = self.toks[j].start
                end_idx = self._block(j)
                end = self.toks[end_idx - 1].end
                if word == "catch":
                    self.catches.append(CatchRegion(start, end))
                j = end_idx
        return j


def _collect_calls(tokens: list[Token]) -> list[CallSite]:
    """Receiver-qualified call sites: a dotted ident chain, a name, '(...)'."""
    calls: list[CallSite] = []
    n = len(tokens)
    for i, tok in enumerate(tokens):
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            continue
        if i + 1 >= n or tokens[i + 1].text != "(":
            continue
        if i == 0 or tokens[i - 1].text != ".":
            continue
        # walk the receiver chain backwards over ident ('.' ident)* / this
        j = i - 1
        parts: list[Token] = []
        while j > 0 and tokens[j].text == ".":
            prev = tokens[j - 1]
            if prev.kind == "ident" and (prev.text not in _KEYWORDS or prev.text in ("this", "super")):
                parts.append(prev)
                j -= 2
            else:
                break
        if not parts:
            continue
        parts.reverse()
        receiver = ".".join(p.text for p in parts)
        depth = 0
        close = None
        for k in range(i + 1, n):
            t = tokens[k].text
            if t == "(":
                depth += 1
            elif t == ")":
                depth -= 1
                if depth == 0:
                    close = k
                    break
        if close is None:
            continue
        args: list[tuple[Token, ...]] = []
        group: list[Token] = []
        depth = 0
        angle = 0
        for k in range(i + 2, close):
            t = tokens[k]
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                depth -= 1
            elif t.text == "<":
                angle += 1
            elif t.text == ">":
                angle = max(0, angle - 1)
            if t.text == "," and depth == 0 and angle == 0:
                args.append(tuple(group))
                group = []
                continue
            group.append(t)
        if group:
            args.append(tuple(group))
        calls.append(
            CallSite(
                receiver=receiver,
                name=tok.text,
                name_start=tok.start,
                name_end=tok.end,
                span=(parts[0].start, tokens[close].end),
                args=tuple(args),
                line=parts[0].line,
            )
        )
    return calls


def parse_java(path: str, source: str) -> JavaFile:
    """Scan one compilation unit. Never raises on malformed input."""
    tokens, clean = lex(source)
    scanner = _Scanner(path, source, tokens)
    scanner.scan()
    depth = 0
    balanced = True
    for t in tokens:
        if t.text == "{":
            depth += 1
        elif t.text == "}":
            depth -= 1
            if depth < 0:
                balanced = False
    balanced = balanced and depth == 0
    ok = clean and balanced and not scanner.truncated
    jf = JavaFile(
        path=path,
        source=source,
        ok=ok,
        tokens=tokens,
        methods=sorted(scanner.methods, key=lambda m: m.decl_start),
        branches=scanner.branches,
        catches=scanner.catches,
        calls=_collect_calls(tokens),
        types=scanner.types,
    )
    starts = [0]
    for idx, ch in enumerate(source):
        if ch == "\n":
            starts.append(idx + 1)
    jf._line_starts = starts
    return jf


def decode_source(data: bytes) -> str:
    """Decode repository bytes losslessly: utf-8 first, latin-1 as fallback."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return data.decode("latin-1")


def encode_source(text: str) -> bytes:
    """Inverse of decode_source for round-trip writes."""
    try:
        return text.encode("utf-8")
    except UnicodeEncodeError:  # pragma: no cover - latin-1 decoded input
        return text.encode("latin-1")
