"""Syntax tree for the supported Java subset.

Every statement carries a source position pointing at its first token, and
every block records the character span it covers so that comments can be
attached to the nearest enclosing statement list after parsing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class SourcePosition:
    """1-based line/column location in a source file."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass
class Literal:
    text: str


@dataclass
class Name:
    identifier: str


@dataclass
class FieldAccess:
    target: "Expr"
    name: str


@dataclass
class Invocation:
    """A method call site. `receiver` is None for unqualified calls."""

    receiver: Optional["Expr"]
    name: str
    arguments: list["Expr"]
    position: SourcePosition

    @property
    def arity(self) -> int:
        return len(self.arguments)


@dataclass
class NewInstance:
    """`new T(args)`, optionally with an anonymous class body.

    Statements from anonymous class method bodies are hoisted into
    `anonymous_body` so they attribute to the enclosing method.
    """

    type_name: str
    arguments: list["Expr"]
    position: SourcePosition
    anonymous_body: Optional["Block"] = None

    @property
    def arity(self) -> int:
        return len(self.arguments)


@dataclass
class NewArray:
    type_name: str
    dimensions: list["Expr"]
    initializer: list["Expr"] = field(default_factory=list)


@dataclass
class Unary:
    op: str
    operand: "Expr"


@dataclass
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass
class Assignment:
    op: str
    target: "Expr"
    value: "Expr"


@dataclass
class Conditional:
    condition: "Expr"
    if_true: "Expr"
    if_false: "Expr"


@dataclass
class Cast:
    type_name: str
    operand: "Expr"


@dataclass
class ArrayAccess:
    target: "Expr"
    index: "Expr"


@dataclass
class InstanceOf:
    operand: "Expr"
    type_name: str


@dataclass
class Lambda:
    parameters: list[str]
    body: Union["Block", "Expr"]


@dataclass
class MethodRef:
    target: str
    name: str


Expr = Union[
    Literal, Name, FieldAccess, Invocation, NewInstance, NewArray, Unary,
    Binary, Assignment, Conditional, Cast, ArrayAccess, InstanceOf, Lambda,
    MethodRef,
]


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass
class Comment:
    """A comment preserved verbatim, attached to its nearest enclosing block."""

    text: str
    position: SourcePosition
    is_doc: bool = False


@dataclass
class Block:
    statements: list["Statement"]
    position: SourcePosition
    # character offsets (start, end) of the region this block covers
    span: tuple[int, int] = (0, 0)
    comments: list[Comment] = field(default_factory=list)


@dataclass
class ExprStmt:
    expression: Expr
    position: SourcePosition


@dataclass
class LocalVar:
    name: str
    type_name: str
    initializer: Optional[Expr] = None


@dataclass
class LocalDecl:
    declarations: list[LocalVar]
    position: SourcePosition


@dataclass
class IfStmt:
    condition: Expr
    then_branch: "Statement"
    else_branch: Optional["Statement"]
    position: SourcePosition


@dataclass
class LoopStmt:
    """while / do / for / foreach loops, normalized to one node.

    `init` holds for-init statements (or the foreach variable declaration),
    `update` holds for-update expressions (or the foreach iterable).
    """

    kind: str
    init: list["Statement"]
    condition: Optional[Expr]
    update: list[Expr]
    body: "Statement"
    position: SourcePosition


@dataclass
class ReturnStmt:
    value: Optional[Expr]
    position: SourcePosition


@dataclass
class ContinueStmt:
    label: Optional[str]
    position: SourcePosition


@dataclass
class BreakStmt:
    label: Optional[str]
    position: SourcePosition


@dataclass
class VariableRef:
    identifier: str


@dataclass
class OpaqueThrow:
    """A thrown expression that is neither `new T(...)` nor a bare variable."""

    expression: Expr


@dataclass
class ThrowStmt:
    thrown: Union[NewInstance, VariableRef, OpaqueThrow]
    position: SourcePosition


@dataclass
class CatchClause:
    caught_types: list[str]
    variable: str
    body: Block
    position: SourcePosition

    @property
    def id(self) -> str:
        return str(self.position)


@dataclass
class TryStmt:
    body: Block
    catches: list[CatchClause]
    finally_block: Optional[Block]
    position: SourcePosition

    @property
    def id(self) -> str:
        return str(self.position)


Statement = Union[
    Block, ExprStmt, LocalDecl, IfStmt, LoopStmt, ReturnStmt, ContinueStmt,
    BreakStmt, ThrowStmt, TryStmt,
]


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass
class DocComment:
    raw: str
    throws_tags: list[tuple[str, str]]


@dataclass
class Param:
    name: str
    type_name: str


CONSTRUCTOR_NAME = "<init>"


@dataclass
class MethodDecl:
    name: str
    params: list[Param]
    declared_throws: list[str]
    body: Optional[Block]
    doc: Optional[DocComment]
    position: SourcePosition

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class TypeDecl:
    name: str  # qualified with the unit's package
    kind: str  # "class" | "interface"
    superclass: Optional[str]
    interfaces: list[str]
    methods: list[MethodDecl]
    doc: Optional[DocComment]
    position: SourcePosition


@dataclass
class CompilationUnit:
    package: str
    imports: list[str]
    types: list[TypeDecl]
    file: str
