"""Parse and print the ``:strips`` + ``:typing`` subset of PDDL."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from pyparsing import (
    Forward,
    Group,
    ParseException,
    Regex,
    StringEnd,
    Suppress,
    ZeroOrMore,
    col,
    lineno,
)

from lmgr.errors import (
    PDDLSemanticError,
    PDDLSyntaxError,
    UnsupportedFeatureError,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

__all__ = [
    'TypedName',
    'Atom',
    'PredicateDecl',
    'ActionSchema',
    'DomainAST',
    'ProblemAST',
    'parse_domain',
    'parse_problem',
]

SUPPORTED_REQUIREMENTS = frozenset({':strips', ':typing'})
ROOT_TYPE = 'object'


@dataclass(frozen=True)
class TypedName:
    """A typed object, constant, variable or type declaration."""

    name: str
    type: str = ROOT_TYPE
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Atom:
    """A positive literal ``(predicate arg...)``.

    Arguments starting with ``?`` are variables.
    """

    predicate: str
    args: tuple[str, ...] = ()
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return '(' + ' '.join((self.predicate, *self.args)) + ')'


@dataclass(frozen=True)
class PredicateDecl:
    """A predicate declaration with typed parameters."""

    name: str
    params: tuple[TypedName, ...] = ()
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ActionSchema:
    """A STRIPS action schema."""

    name: str
    parameters: tuple[TypedName, ...]
    precondition: tuple[Atom, ...]
    add_effects: tuple[Atom, ...]
    del_effects: tuple[Atom, ...]
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class DomainAST:
    """Abstract syntax of a PDDL domain."""

    name: str
    requirements: tuple[str, ...]
    types: tuple[TypedName, ...]
    constants: tuple[TypedName, ...]
    predicates: tuple[PredicateDecl, ...]
    actions: tuple[ActionSchema, ...]

    def predicate(self, name: str) -> PredicateDecl | None:
        """Return the declaration of predicate `name`, if any."""
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def has_type(self, name: str) -> bool:
        """Whether `name` is the root type or a declared type."""
        return name == ROOT_TYPE or any(t.name == name for t in self.types)

    def supertypes(self, name: str) -> tuple[str, ...]:
        """Return `name` and all its ancestors up to the root type."""
        parents = {t.name: t.type for t in self.types}
        chain = [name]
        while chain[-1] != ROOT_TYPE:
            parent = parents.get(chain[-1], ROOT_TYPE)
            if parent in chain:
                raise PDDLSemanticError(f'cyclic type hierarchy at {parent}')
            chain.append(parent)
        return tuple(chain)

    def is_subtype(self, name: str, ancestor: str) -> bool:
        """Whether `name` equals or descends from `ancestor`."""
        return ancestor in self.supertypes(name)

    def to_pddl(self) -> str:
        """Pretty-print the domain as PDDL text."""
        lines = [f'(define (domain {self.name})']
        if self.requirements:
            lines.append(f'  (:requirements {" ".join(self.requirements)})')
        if self.types:
            lines.append(f'  (:types {_typed_list(self.types, True)})')
        if self.constants:
            lines.append(f'  (:constants {_typed_list(self.constants)})')
        if self.predicates:
            lines.append('  (:predicates')
            for p in self.predicates:
                params = _typed_list(p.params)
                lines.append(f'    ({p.name}{" " if params else ""}{params})')
            lines.append('  )')
        for a in self.actions:
            lines.append(f'  (:action {a.name}')
            lines.append(f'    :parameters ({_typed_list(a.parameters)})')
            lines.append(f'    :precondition {_conjunction(a.precondition)}')
            effects = [str(e) for e in a.add_effects]
            effects += [f'(not {e})' for e in a.del_effects]
            lines.append(f'    :effect (and {" ".join(effects)})')
            lines.append('  )')
        lines.append(')')
        return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class ProblemAST:
    """Abstract syntax of a PDDL problem."""

    name: str
    domain_name: str
    objects: tuple[TypedName, ...]
    init: tuple[Atom, ...]
    goal: tuple[Atom, ...]

    def to_pddl(self) -> str:
        """Pretty-print the problem as PDDL text."""
        lines = [
            f'(define (problem {self.name})',
            f'  (:domain {self.domain_name})',
            f'  (:objects {_typed_list(self.objects)})',
            '  (:init',
        ]
        lines.extend(f'    {a}' for a in self.init)
        lines.append('  )')
        lines.append(f'  (:goal {_conjunction(self.goal)})')
        lines.append(')')
        return '\n'.join(lines) + '\n'


def _typed_list(items: Iterable[TypedName], always_typed=False) -> str:
    parts = []
    for it in items:
        if always_typed or it.type != ROOT_TYPE:
            parts.append(f'{it.name} - {it.type}')
        else:
            parts.append(it.name)
    return ' '.join(parts)


def _conjunction(atoms: Sequence[Atom]) -> str:
    return '(and ' + ' '.join(map(str, atoms)) + ')' if atoms else '(and)'


# ---------------------------------------------------------------------------
# s-expression grammar
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Node:
    """An s-expression node, either a symbol or a list of nodes."""

    value: str | tuple[_Node, ...]
    line: int
    column: int

    @property
    def is_list(self) -> bool:
        return isinstance(self.value, tuple)

    @property
    def head(self) -> str | None:
        """Symbol at the front of a list node."""
        if self.is_list and self.value and not self.value[0].is_list:
            return self.value[0].value
        return None


def _make_symbol(s: str, loc: int, toks) -> _Node:
    return _Node(toks[0].lower(), lineno(loc, s), col(loc, s))


def _make_list(s: str, loc: int, toks) -> _Node:
    return _Node(tuple(toks[0]), lineno(loc, s), col(loc, s))


def _grammar():
    symbol = Regex(r'[^\s()]+').set_parse_action(_make_symbol)
    sexpr = Forward()
    sexpr <<= (
        Suppress('(') + Group(ZeroOrMore(symbol | sexpr)) + Suppress(')')
    ).set_parse_action(_make_list)
    return sexpr + StringEnd()


_DOCUMENT = _grammar()
_COMMENT = re.compile(r';[^\n]*')


def _parse_sexpr(text: str) -> _Node:
    # blank out comments so positions of the remaining tokens are unchanged
    text = _COMMENT.sub(lambda m: ' ' * len(m.group()), text)
    try:
        return _DOCUMENT.parse_string(text, parse_all=True)[0]
    except ParseException as err:
        raise PDDLSyntaxError(
            f'invalid PDDL syntax: {err.msg}', err.lineno, err.col
        ) from err


def _symbol(node: _Node, what: str) -> str:
    if node.is_list:
        raise PDDLSyntaxError(f'expected {what}', node.line, node.column)
    return node.value


def _list(node: _Node, what: str) -> tuple[_Node, ...]:
    if not node.is_list:
        raise PDDLSyntaxError(
            f'expected {what}, got {node.value!r}', node.line, node.column
        )
    return node.value


def _typed_names(nodes: Sequence[_Node], what: str) -> list[TypedName]:
    """Parse ``a b - t c`` into typed names."""
    result = []
    pending: list[_Node] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        if node.is_list:
            raise PDDLSyntaxError(
                f'unexpected list in {what}', node.line, node.column
            )
        if node.value == '-':
            if i + 1 >= len(nodes) or not pending:
                raise PDDLSyntaxError(
                    f'dangling type marker in {what}', node.line, node.column
                )
            type_node = nodes[i + 1]
            if type_node.head == 'either':
                raise UnsupportedFeatureError(
                    '"either" types are not supported',
                    type_node.line,
                    type_node.column,
                )
            t = _symbol(type_node, 'type name')
            result += [
                TypedName(n.value, t, n.line, n.column) for n in pending
            ]
            pending = []
            i += 2
            continue
        pending.append(node)
        i += 1
    result += [
        TypedName(n.value, ROOT_TYPE, n.line, n.column) for n in pending
    ]
    return result


_UNSUPPORTED_CONNECTIVES = {
    'not': ':negative-preconditions',
    'or': ':disjunctive-preconditions',
    'imply': ':disjunctive-preconditions',
    'exists': ':existential-preconditions',
    'forall': ':universal-preconditions',
    'when': ':conditional-effects',
    '=': ':equality',
    'increase': ':action-costs',
    'decrease': ':numeric-fluents',
}


def _atom(node: _Node, what: str) -> Atom:
    items = _list(node, what)
    if not items:
        raise PDDLSyntaxError(f'empty {what}', node.line, node.column)
    head = _symbol(items[0], 'predicate name')
    if head in _UNSUPPORTED_CONNECTIVES:
        feature = _UNSUPPORTED_CONNECTIVES[head]
        raise UnsupportedFeatureError(
            f'{feature} is not supported ("{head}" in {what})',
            node.line,
            node.column,
        )
    args = tuple(_symbol(n, 'argument') for n in items[1:])
    return Atom(head, args, node.line, node.column)


def _conjunction_atoms(node: _Node, what: str) -> list[_Node]:
    """Return the literal nodes of ``(and ...)``, a single literal or
    ``()``."""
    items = _list(node, what)
    if not items:
        return []
    if node.head == 'and':
        return list(items[1:])
    return [node]


def _check_requirements(nodes: Sequence[_Node]) -> tuple[str, ...]:
    reqs = []
    for n in nodes:
        req = _symbol(n, 'requirement')
        if req not in SUPPORTED_REQUIREMENTS:
            raise UnsupportedFeatureError(
                f'unsupported requirement {req}', n.line, n.column
            )
        reqs.append(req)
    return tuple(reqs)


def _parse_action(node: _Node) -> ActionSchema:
    items = _list(node, 'action')
    if len(items) < 2:
        raise PDDLSyntaxError('action without name', node.line, node.column)
    name = _symbol(items[1], 'action name')
    params: list[TypedName] = []
    pre: list[Atom] = []
    add: list[Atom] = []
    dele: list[Atom] = []
    i = 2
    while i < len(items):
        key = _symbol(items[i], 'action keyword')
        if i + 1 >= len(items):
            raise PDDLSyntaxError(
                f'missing value for {key}', items[i].line, items[i].column
            )
        value = items[i + 1]
        if key == ':parameters':
            params = _typed_names(_list(value, 'parameter list'), 'parameters')
        elif key == ':precondition':
            pre = [
                _atom(n, f'precondition of {name}')
                for n in _conjunction_atoms(value, 'precondition')
            ]
        elif key == ':effect':
            for n in _conjunction_atoms(value, 'effect'):
                if n.head == 'not':
                    inner = _list(n, 'negative effect')
                    if len(inner) != 2:
                        raise PDDLSyntaxError(
                            'malformed negative effect', n.line, n.column
                        )
                    dele.append(_atom(inner[1], f'effect of {name}'))
                else:
                    add.append(_atom(n, f'effect of {name}'))
        else:
            raise UnsupportedFeatureError(
                f'unsupported action keyword {key}',
                items[i].line,
                items[i].column,
            )
        i += 2
    return ActionSchema(
        name,
        tuple(params),
        tuple(pre),
        tuple(add),
        tuple(dele),
        node.line,
        node.column,
    )


def _check_atom(
    atom: Atom,
    domain: DomainAST,
    where: str,
) -> PredicateDecl:
    decl = domain.predicate(atom.predicate)
    if decl is None:
        raise PDDLSemanticError(
            f'undeclared predicate {atom.predicate} in {where}',
            atom.line,
            atom.column,
        )
    if decl.arity != len(atom.args):
        raise PDDLSemanticError(
            f'predicate {atom.predicate} expects {decl.arity} arguments, '
            f'got {len(atom.args)} in {where}',
            atom.line,
            atom.column,
        )
    return decl


def _check_domain(domain: DomainAST) -> None:
    for t in domain.types:
        if not domain.has_type(t.type):
            raise PDDLSemanticError(
                f'unknown parent type {t.type} of {t.name}', t.line, t.column
            )
        domain.supertypes(t.name)

    def check_types(names: Iterable[TypedName], where: str):
        for n in names:
            if not domain.has_type(n.type):
                raise PDDLSemanticError(
                    f'unknown type {n.type} in {where}', n.line, n.column
                )

    check_types(domain.constants, 'constants')
    seen = set()
    for p in domain.predicates:
        if p.name in seen:
            raise PDDLSemanticError(
                f'duplicate predicate {p.name}', p.line, p.column
            )
        seen.add(p.name)
        check_types(p.params, f'predicate {p.name}')

    constants = {c.name for c in domain.constants}
    seen = set()
    for a in domain.actions:
        if a.name in seen:
            raise PDDLSemanticError(
                f'duplicate action {a.name}', a.line, a.column
            )
        seen.add(a.name)
        check_types(a.parameters, f'action {a.name}')
        variables = {p.name for p in a.parameters}
        for atom in a.precondition + a.add_effects + a.del_effects:
            _check_atom(atom, domain, f'action {a.name}')
            for arg in atom.args:
                if arg.startswith('?') and arg not in variables:
                    raise PDDLSemanticError(
                        f'unbound variable {arg} in action {a.name}',
                        atom.line,
                        atom.column,
                    )
                if not arg.startswith('?') and arg not in constants:
                    raise PDDLSemanticError(
                        f'unknown constant {arg} in action {a.name}',
                        atom.line,
                        atom.column,
                    )


def parse_domain(text: str) -> DomainAST:
    """Parse a PDDL domain.

    Symbols are case-insensitive and lower-cased. Only the ``:strips`` and
    ``:typing`` requirements are supported, with ``:constants``.

    Parameters
    ----------
    text : str
        The domain text.

    Returns
    -------
    DomainAST
        The domain syntax tree.

    Raises
    ------
    PDDLSyntaxError
        If `text` is not well-formed.
    UnsupportedFeatureError
        If `text` uses PDDL features outside the supported subset.
    PDDLSemanticError
        If `text` references undeclared types, predicates or variables.
    """
    root = _parse_sexpr(text)
    items = _list(root, 'domain definition')
    if root.head != 'define' or len(items) < 2:
        raise PDDLSyntaxError(
            'expected (define (domain ...) ...)', root.line, root.column
        )
    header = _list(items[1], 'domain header')
    if items[1].head != 'domain' or len(header) != 2:
        raise PDDLSyntaxError(
            'expected (domain NAME)', items[1].line, items[1].column
        )
    name = _symbol(header[1], 'domain name')

    requirements: tuple[str, ...] = ()
    types: list[TypedName] = []
    constants: list[TypedName] = []
    predicates: list[PredicateDecl] = []
    actions: list[ActionSchema] = []
    for section in items[2:]:
        body = _list(section, 'domain section')
        key = section.head
        if key == ':requirements':
            requirements = _check_requirements(body[1:])
        elif key == ':types':
            declared = _typed_names(body[1:], 'types')
            types = [t for t in declared if t.name != ROOT_TYPE]
        elif key == ':constants':
            constants = _typed_names(body[1:], 'constants')
        elif key == ':predicates':
            for p in body[1:]:
                decl = _list(p, 'predicate declaration')
                if not decl:
                    raise PDDLSyntaxError(
                        'empty predicate declaration', p.line, p.column
                    )
                params = _typed_names(decl[1:], 'predicate parameters')
                predicates.append(
                    PredicateDecl(
                        _symbol(decl[0], 'predicate name'),
                        tuple(params),
                        p.line,
                        p.column,
                    )
                )
        elif key == ':action':
            actions.append(_parse_action(section))
        else:
            raise UnsupportedFeatureError(
                f'unsupported domain section {key}',
                section.line,
                section.column,
            )

    domain = DomainAST(
        name,
        requirements,
        tuple(types),
        tuple(constants),
        tuple(predicates),
        tuple(actions),
    )
    _check_domain(domain)
    return domain


def _is_placeholder(node: _Node) -> bool:
    return (
        not node.is_list
        and node.value.startswith('<')
        and node.value.endswith('>')
    )


def parse_problem(text: str, d: DomainAST) -> ProblemAST:
    """Parse a PDDL problem of domain `d`.

    A goal may contain a placeholder symbol such as ``<HYPOTHESIS>``, which
    is dropped, as benchmark templates do.

    Parameters
    ----------
    text : str
        The problem text.
    d : DomainAST
        The domain of the problem.

    Returns
    -------
    ProblemAST
        The problem syntax tree.

    Raises
    ------
    PDDLSyntaxError
        If `text` is not well-formed.
    UnsupportedFeatureError
        If `text` uses PDDL features outside the supported subset.
    PDDLSemanticError
        If `text` references unknown objects, types or predicates, or an
        atom has the wrong arity or argument types.
    """
    root = _parse_sexpr(text)
    items = _list(root, 'problem definition')
    if root.head != 'define' or len(items) < 2:
        raise PDDLSyntaxError(
            'expected (define (problem ...) ...)', root.line, root.column
        )
    header = _list(items[1], 'problem header')
    if items[1].head != 'problem' or len(header) != 2:
        raise PDDLSyntaxError(
            'expected (problem NAME)', items[1].line, items[1].column
        )
    name = _symbol(header[1], 'problem name')

    domain_name = d.name
    objects: list[TypedName] = []
    init: list[Atom] = []
    goal: list[Atom] = []
    for section in items[2:]:
        body = _list(section, 'problem section')
        key = section.head
        if key == ':domain':
            if len(body) != 2:
                raise PDDLSyntaxError(
                    'expected (:domain NAME)', section.line, section.column
                )
            domain_name = _symbol(body[1], 'domain name')
            if domain_name != d.name:
                raise PDDLSemanticError(
                    f'problem is for domain {domain_name}, not {d.name}',
                    section.line,
                    section.column,
                )
        elif key == ':requirements':
            _check_requirements(body[1:])
        elif key == ':objects':
            objects = _typed_names(body[1:], 'objects')
        elif key == ':init':
            init = [_atom(n, 'initial state') for n in body[1:]]
        elif key == ':goal':
            if len(body) != 2:
                raise PDDLSyntaxError(
                    'expected a single goal formula',
                    section.line,
                    section.column,
                )
            if _is_placeholder(body[1]):
                goal = []
                continue
            goal = [
                _atom(n, 'goal')
                for n in _conjunction_atoms(body[1], 'goal')
                if not _is_placeholder(n)
            ]
        else:
            raise UnsupportedFeatureError(
                f'unsupported problem section {key}',
                section.line,
                section.column,
            )

    problem = ProblemAST(
        name, domain_name, tuple(objects), tuple(init), tuple(goal)
    )
    _check_problem(problem, d)
    return problem


def object_types(p: ProblemAST, d: DomainAST) -> dict[str, str]:
    """Map every object and domain constant to its declared type."""
    types = {c.name: c.type for c in d.constants}
    types.update({o.name: o.type for o in p.objects})
    return types


def check_ground_atom(
    atom: Atom,
    d: DomainAST,
    types: dict[str, str],
    where: str,
) -> None:
    """Check predicate, arity, objects and argument types of `atom`.

    Raises
    ------
    PDDLSemanticError
        If the check fails.
    """
    decl = _check_atom(atom, d, where)
    for arg, param in zip(atom.args, decl.params):
        if arg not in types:
            raise PDDLSemanticError(
                f'unknown object {arg} in {where}', atom.line, atom.column
            )
        if not d.is_subtype(types[arg], param.type):
            raise PDDLSemanticError(
                f'object {arg} of type {types[arg]} does not match '
                f'parameter type {param.type} of {atom.predicate} in {where}',
                atom.line,
                atom.column,
            )


def _check_problem(problem: ProblemAST, d: DomainAST) -> None:
    seen = {c.name for c in d.constants}
    for o in problem.objects:
        if not d.has_type(o.type):
            raise PDDLSemanticError(
                f'unknown type {o.type} of object {o.name}', o.line, o.column
            )
        if o.name in seen:
            raise PDDLSemanticError(
                f'duplicate object {o.name}', o.line, o.column
            )
        seen.add(o.name)
    types = object_types(problem, d)
    for atom in problem.init:
        check_ground_atom(atom, d, types, 'initial state')
    for atom in problem.goal:
        check_ground_atom(atom, d, types, 'goal')
