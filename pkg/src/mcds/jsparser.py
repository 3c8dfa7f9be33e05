"""Recursive-descent parser for the supported JavaScript subset.

Supported: ES5 statements and expressions, arrow functions, shorthand and
method object properties, and template literals (desugared to string
concatenation). Everything else (classes, generators, async/await,
destructuring, modules, ...) parses into Opaque nodes with children kept
where they can be recovered, and is counted in the parse diagnostics on
the Program node instead of aborting the file.
"""

from __future__ import annotations

from typing import Any, Optional

from .errors import FatalSyntaxError
from .jsast import AstNode, Span, number_nodes
from .jslexer import Token, TemplateSegments, tokenize

_ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
    ">>>=", "**=",
})

# precedence, operator list, node kind
_BINARY_LEVELS = [
    (1, ("??",), "LogicalExpression"),
    (2, ("||",), "LogicalExpression"),
    (3, ("&&",), "LogicalExpression"),
    (4, ("|",), "BinaryExpression"),
    (5, ("^",), "BinaryExpression"),
    (6, ("&",), "BinaryExpression"),
    (7, ("==", "!=", "===", "!=="), "BinaryExpression"),
    (8, ("<", ">", "<=", ">=", "instanceof", "in"), "BinaryExpression"),
    (9, ("<<", ">>", ">>>"), "BinaryExpression"),
    (10, ("+", "-"), "BinaryExpression"),
    (11, ("*", "/", "%"), "BinaryExpression"),
]

_UNARY_OPS = frozenset({"!", "~", "+", "-", "typeof", "void", "delete"})

_CONTEXTUAL = frozenset({
    "let", "of", "get", "set", "static", "async", "await", "yield",
    "undefined",
})


class ParseError(Exception):
    """Internal statement-level error; triggers recovery, never escapes."""

    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.token = token


class Parser:
    def __init__(self, source: str):
        self.src = source
        self.tokens, lex_diags = tokenize(source)
        self.i = 0
        self.diagnostics: list[dict[str, Any]] = [
            {"message": d.message, "line": d.line, "col": d.col}
            for d in lex_diags
        ]

    # ---- token helpers ----------------------------------------------

    def cur(self) -> Token:
        return self.tokens[self.i]

    def la(self, k: int = 1) -> Token:
        j = min(self.i + k, len(self.tokens) - 1)
        return self.tokens[j]

    def at(self, value: str, ttype: str = "punct") -> bool:
        tok = self.cur()
        return tok.type == ttype and tok.value == value

    def at_name(self, value: str) -> bool:
        return self.at(value, "name")

    def advance(self) -> Token:
        tok = self.cur()
        if tok.type != "eof":
            self.i += 1
        return tok

    def expect(self, value: str, ttype: str = "punct") -> Token:
        if not self.at(value, ttype):
            raise ParseError(f"expected {value!r}", self.cur())
        return self.advance()

    def _prev(self) -> Token:
        return self.tokens[max(self.i - 1, 0)]

    def span_from(self, start: Token) -> Span:
        end = self._prev()
        return Span(start.line, start.col, end.end_line, end.end_col)

    def node(self, kind: str, children: list[AstNode], start: Token,
             info: Optional[dict] = None) -> AstNode:
        span = self.span_from(start)
        end = self._prev()
        raw = ""
        if start.start_offset >= 0 and end.end_offset >= start.start_offset:
            raw = self.src[start.start_offset:end.end_offset]
        return AstNode(kind, children, span, raw, info or {})

    def opaque(self, start: Token, children: Optional[list[AstNode]] = None,
               reason: str = "") -> AstNode:
        info = {"reason": reason} if reason else {}
        return self.node("Opaque", children or [], start, info)

    def diag(self, message: str, token: Token) -> None:
        self.diagnostics.append(
            {"message": message, "line": token.line, "col": token.col})

    # ---- program ----------------------------------------------------

    def parse_program(self) -> AstNode:
        start = self.cur()
        body: list[AstNode] = []
        while self.cur().type != "eof":
            body.append(self.parse_statement_safe())
        program = self.node("Program", body, start)
        if not body:
            program.span = Span(1, 0, 1, 0)
        program.info["diagnostics"] = self.diagnostics
        return program

    def parse_statement_safe(self) -> AstNode:
        start = self.cur()
        begin = self.i
        try:
            return self.parse_statement()
        except ParseError as err:
            self.diag(err.message, err.token)
            self.i = max(self.i, begin)
            return self._recover(start)

    def _recover(self, start: Token) -> AstNode:
        """Skip to a plausible statement boundary and wrap it as Opaque."""
        consumed_any = False
        depth = 0
        while self.cur().type != "eof":
            tok = self.cur()
            if tok.type == "punct" and tok.value in ("{", "(", "["):
                depth += 1
            elif tok.type == "punct" and tok.value in (")", "]"):
                depth = max(depth - 1, 0)
            elif tok.type == "punct" and tok.value == "}":
                if depth == 0:
                    break  # leave the brace for the enclosing block
                depth -= 1
            elif depth == 0 and consumed_any and tok.nl_before:
                break
            self.advance()
            consumed_any = True
            prev = self._prev()
            if depth == 0 and prev.type == "punct" and prev.value == ";":
                break
        if not consumed_any and self.cur().type != "eof":
            self.advance()
        return self.opaque(start, [], "parse error")

    # ---- statements -------------------------------------------------

    def parse_statement(self) -> AstNode:
        tok = self.cur()
        if tok.type == "punct":
            if tok.value == "{":
                return self.parse_block()
            if tok.value == ";":
                start = self.advance()
                return self.node("Opaque", [], start, {"estree": "EmptyStatement"})
        if tok.type == "name":
            v = tok.value
            if v in ("var", "const"):
                return self.parse_var_statement()
            if v == "let":
                nxt = self.la()
                if nxt.type == "name" and not nxt.is_keyword or \
                        nxt.type == "name" and nxt.value in _CONTEXTUAL or \
                        (nxt.type == "punct" and nxt.value in ("[", "{")):
                    return self.parse_var_statement()
            if v == "function":
                return self.parse_function(declaration=True)
            if v == "async" and self.la().type == "name" \
                    and self.la().value == "function" and not self.la().nl_before:
                start = self.advance()
                fn = self.parse_function(declaration=True)
                return self._relabel_opaque(fn, start, "async function")
            if v == "if":
                return self.parse_if()
            if v == "for":
                return self.parse_for()
            if v == "while":
                return self.parse_while()
            if v == "do":
                return self.parse_do_while()
            if v == "return":
                return self.parse_return()
            if v in ("break", "continue"):
                return self.parse_break_continue()
            if v == "throw":
                return self.parse_throw()
            if v == "try":
                return self.parse_try()
            if v == "switch":
                return self.parse_switch()
            if v == "with":
                return self.parse_with()
            if v == "class":
                return self.parse_class()
            if v == "debugger":
                start = self.advance()
                self.consume_statement_end()
                return self.node("Opaque", [], start, {"estree": "DebuggerStatement"})
            if v in ("import", "export"):
                return self.parse_module_statement()
            if not tok.is_keyword or v in _CONTEXTUAL:
                if self.la().type == "punct" and self.la().value == ":":
                    # labeled statement
                    start = self.advance()
                    label = AstNode("Identifier", [], self.span_from(start),
                                    start.value, {"name": start.value})
                    self.expect(":")
                    body = self.parse_statement_safe()
                    return self.node("Opaque", [label, body], start,
                                     {"estree": "LabeledStatement"})
        return self.parse_expression_statement()

    def parse_block(self) -> AstNode:
        start = self.expect("{")
        body: list[AstNode] = []
        while not self.at("}"):
            if self.cur().type == "eof":
                self.diag("unclosed block", start)
                break
            body.append(self.parse_statement_safe())
        if self.at("}"):
            self.advance()
        return self.node("BlockStatement", body, start)

    def parse_var_statement(self) -> AstNode:
        node = self.parse_var_declaration()
        self.consume_statement_end()
        return node

    def parse_var_declaration(self, allow_in: bool = True) -> AstNode:
        start = self.advance()  # var / let / const
        kind = start.value
        children: list[AstNode] = []
        declarators: list[tuple[int, Optional[int]]] = []
        while True:
            target = self.parse_binding_target()
            id_idx = len(children)
            children.append(target)
            init_idx: Optional[int] = None
            if self.at("="):
                self.advance()
                init = self.parse_assignment(allow_in=allow_in)
                init_idx = len(children)
                children.append(init)
            declarators.append((id_idx, init_idx))
            if self.at(","):
                self.advance()
                continue
            break
        return self.node("VariableDeclaration", children, start,
                         {"kind": kind, "declarators": declarators})

    def parse_binding_target(self) -> AstNode:
        tok = self.cur()
        if tok.type == "name" and (not tok.is_keyword or tok.value in _CONTEXTUAL):
            self.advance()
            return self.node("Identifier", [], tok, {"name": tok.value})
        if tok.type == "punct" and tok.value in ("{", "["):
            # destructuring pattern: out of subset, keep the pieces
            expr = self.parse_object() if tok.value == "{" else self.parse_array()
            return AstNode("Opaque", expr.children, expr.span, expr.raw,
                           {"estree": "Pattern"})
        raise ParseError("expected binding identifier", tok)

    def parse_function(self, declaration: bool) -> AstNode:
        start = self.expect("function", "name")
        generator = False
        if self.at("*"):
            self.advance()
            generator = True
        children: list[AstNode] = []
        name_idx = None
        tok = self.cur()
        if tok.type == "name" and (not tok.is_keyword or tok.value in _CONTEXTUAL):
            self.advance()
            children.append(self.node("Identifier", [], tok, {"name": tok.value}))
            name_idx = 0
        elif declaration:
            raise ParseError("function declaration needs a name", tok)
        params = self.parse_params()
        param_idxs = list(range(len(children), len(children) + len(params)))
        children.extend(params)
        body = self.parse_block()
        body_idx = len(children)
        children.append(body)
        kind = "FunctionDeclaration" if declaration else "FunctionExpression"
        info = {"name_idx": name_idx, "param_idxs": param_idxs,
                "body_idx": body_idx}
        node = self.node(kind, children, start, info)
        if generator:
            return AstNode("Opaque", node.children, node.span, node.raw,
                           dict(node.info, estree="GeneratorFunction"))
        return node

    def parse_params(self) -> list[AstNode]:
        self.expect("(")
        params: list[AstNode] = []
        while not self.at(")"):
            params.append(self.parse_binding_element())
            if self.at(","):
                self.advance()
            elif not self.at(")"):
                raise ParseError("expected ',' or ')' in parameters", self.cur())
        self.expect(")")
        return params

    def parse_binding_element(self) -> AstNode:
        start = self.cur()
        if self.at("..."):
            self.advance()
            arg = self.parse_binding_target()
            return self.node("Opaque", [arg], start, {"estree": "RestElement"})
        target = self.parse_binding_target()
        if self.at("="):
            self.advance()
            default = self.parse_assignment()
            return self.node("Opaque", [target, default], start,
                             {"estree": "AssignmentPattern"})
        return target

    def parse_if(self) -> AstNode:
        start = self.expect("if", "name")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        consequent = self.parse_statement_safe()
        children = [test, consequent]
        if self.at_name("else"):
            self.advance()
            children.append(self.parse_statement_safe())
        return self.node("IfStatement", children, start)

    def parse_for(self) -> AstNode:
        start = self.expect("for", "name")
        self.expect("(")
        init: Optional[AstNode] = None
        if not self.at(";"):
            if self.cur().type == "name" and self.cur().value in ("var", "let", "const") \
                    and not (self.cur().value == "let" and self.la().type == "punct"
                             and self.la().value not in ("[", "{")):
                init = self.parse_var_declaration(allow_in=False)
            else:
                init = self.parse_expression(allow_in=False)
        if self.cur().type == "name" and self.cur().value in ("in", "of"):
            # for-in / for-of: outside the subset, but keep the structure
            form = self.advance().value
            right = self.parse_expression()
            self.expect(")")
            body = self.parse_statement_safe()
            left = init if init is not None else self.opaque(start)
            estree = "ForInStatement" if form == "in" else "ForOfStatement"
            return self.node("Opaque", [left, right, body], start,
                             {"estree": estree})
        slots: dict[str, Optional[int]] = {"init": None, "test": None, "update": None}
        children: list[AstNode] = []
        if init is not None:
            slots["init"] = 0
            children.append(init)
        self.expect(";")
        if not self.at(";"):
            slots["test"] = len(children)
            children.append(self.parse_expression())
        self.expect(";")
        if not self.at(")"):
            slots["update"] = len(children)
            children.append(self.parse_expression())
        self.expect(")")
        body = self.parse_statement_safe()
        slots["body"] = len(children)
        children.append(body)
        return self.node("ForStatement", children, start, {"slots": slots})

    def parse_while(self) -> AstNode:
        start = self.expect("while", "name")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        body = self.parse_statement_safe()
        return self.node("WhileStatement", [test, body], start)

    def parse_do_while(self) -> AstNode:
        start = self.expect("do", "name")
        body = self.parse_statement_safe()
        self.expect("while", "name")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        if self.at(";"):
            self.advance()
        return self.node("Opaque", [body, test], start,
                         {"estree": "DoWhileStatement"})

    def parse_return(self) -> AstNode:
        start = self.expect("return", "name")
        children: list[AstNode] = []
        tok = self.cur()
        if not (tok.type == "eof" or self.at(";") or self.at("}") or tok.nl_before):
            children.append(self.parse_expression())
        self.consume_statement_end()
        return self.node("ReturnStatement", children, start)

    def parse_break_continue(self) -> AstNode:
        start = self.advance()
        estree = "BreakStatement" if start.value == "break" else "ContinueStatement"
        children: list[AstNode] = []
        tok = self.cur()
        if tok.type == "name" and not tok.is_keyword and not tok.nl_before:
            self.advance()
            children.append(self.node("Identifier", [], tok, {"name": tok.value}))
        self.consume_statement_end()
        return self.node("Opaque", children, start, {"estree": estree})

    def parse_throw(self) -> AstNode:
        start = self.expect("throw", "name")
        arg = self.parse_expression()
        self.consume_statement_end()
        return self.node("Opaque", [arg], start, {"estree": "ThrowStatement"})

    def parse_try(self) -> AstNode:
        start = self.expect("try", "name")
        children: list[AstNode] = [self.parse_block()]
        if self.at_name("catch"):
            cstart = self.advance()
            cchildren: list[AstNode] = []
            if self.at("("):
                self.advance()
                cchildren.append(self.parse_binding_target())
                self.expect(")")
            cchildren.append(self.parse_block())
            children.append(self.node("Opaque", cchildren, cstart,
                                      {"estree": "CatchClause"}))
        if self.at_name("finally"):
            self.advance()
            children.append(self.parse_block())
        return self.node("Opaque", children, start, {"estree": "TryStatement"})

    def parse_switch(self) -> AstNode:
        start = self.expect("switch", "name")
        self.expect("(")
        children: list[AstNode] = [self.parse_expression()]
        self.expect(")")
        self.expect("{")
        while not self.at("}") and self.cur().type != "eof":
            cstart = self.cur()
            cchildren: list[AstNode] = []
            if self.at_name("case"):
                self.advance()
                cchildren.append(self.parse_expression())
            elif self.at_name("default"):
                self.advance()
            else:
                raise ParseError("expected 'case' or 'default'", self.cur())
            self.expect(":")
            while not (self.at("}") or self.at_name("case")
                       or self.at_name("default") or self.cur().type == "eof"):
                cchildren.append(self.parse_statement_safe())
            children.append(self.node("Opaque", cchildren, cstart,
                                      {"estree": "SwitchCase"}))
        if self.at("}"):
            self.advance()
        return self.node("Opaque", children, start, {"estree": "SwitchStatement"})

    def parse_with(self) -> AstNode:
        start = self.expect("with", "name")
        self.expect("(")
        obj = self.parse_expression()
        self.expect(")")
        body = self.parse_statement_safe()
        return self.node("Opaque", [obj, body], start, {"estree": "WithStatement"})

    def parse_class(self) -> AstNode:
        start = self.expect("class", "name")
        children: list[AstNode] = []
        tok = self.cur()
        if tok.type == "name" and (not tok.is_keyword or tok.value in _CONTEXTUAL):
            self.advance()
            children.append(self.node("Identifier", [], tok, {"name": tok.value}))
        if self.at_name("extends"):
            self.advance()
            children.append(self.parse_call_member())
        bstart = self.expect("{")
        members: list[AstNode] = []
        while not self.at("}") and self.cur().type != "eof":
            if self.at(";"):
                self.advance()
                continue
            members.append(self.parse_class_member())
        if self.at("}"):
            self.advance()
        children.append(self.node("Opaque", members, bstart, {"estree": "ClassBody"}))
        node = self.node("Opaque", children, start, {"estree": "Class"})
        self.diag("class construct treated as opaque", start)
        return node

    def parse_class_member(self) -> AstNode:
        start = self.cur()
        for modifier in ("static", "async", "get", "set"):
            if self.at_name(modifier):
                after = self.la()
                # only a modifier when something method-like follows
                if after.type == "name" or (after.type == "punct"
                                            and after.value in ("[", "*")) \
                        or after.type in ("str", "num"):
                    self.advance()
        if self.at("*"):
            self.advance()
        key = self.parse_property_key()
        if self.at("("):
            params = self.parse_params()
            body = self.parse_block()
            fstart = start
            fn = self.node("FunctionExpression", params + [body], fstart,
                           {"name_idx": None,
                            "param_idxs": list(range(len(params))),
                            "body_idx": len(params)})
            return self.node("Opaque", [key, fn], start,
                             {"estree": "MethodDefinition"})
        children = [key]
        if self.at("="):
            self.advance()
            children.append(self.parse_assignment())
        self.consume_statement_end()
        return self.node("Opaque", children, start, {"estree": "PropertyDefinition"})

    def parse_module_statement(self) -> AstNode:
        start = self.advance()  # import / export
        self.diag("module syntax treated as opaque", start)
        # Skim tokens to the end of the statement; module syntax does not
        # nest braces except for named specifier lists.
        depth = 0
        while self.cur().type != "eof":
            tok = self.cur()
            if tok.type == "punct" and tok.value in ("{", "(", "["):
                depth += 1
            elif tok.type == "punct" and tok.value in ("}", ")", "]"):
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and tok.type == "punct" and tok.value == ";":
                self.advance()
                break
            elif depth == 0 and tok.nl_before:
                break
            self.advance()
        return self.opaque(start, [], "module statement")

    def parse_expression_statement(self) -> AstNode:
        start = self.cur()
        expr = self.parse_expression()
        self.consume_statement_end()
        return self.node("ExpressionStatement", [expr], start)

    def consume_statement_end(self) -> None:
        if self.at(";"):
            self.advance()
            return
        tok = self.cur()
        if tok.type == "eof" or self.at("}") or tok.nl_before:
            return  # automatic semicolon insertion
        raise ParseError("expected ';'", tok)

    # ---- expressions ------------------------------------------------

    def parse_expression(self, allow_in: bool = True) -> AstNode:
        start = self.cur()
        expr = self.parse_assignment(allow_in=allow_in)
        if self.at(","):
            exprs = [expr]
            while self.at(","):
                self.advance()
                exprs.append(self.parse_assignment(allow_in=allow_in))
            return self.node("Opaque", exprs, start,
                             {"estree": "SequenceExpression"})
        return expr

    def parse_assignment(self, allow_in: bool = True) -> AstNode:
        start = self.cur()
        arrow = self.try_parse_arrow(allow_in)
        if arrow is not None:
            return arrow
        left = self.parse_conditional(allow_in)
        tok = self.cur()
        if tok.type == "punct" and tok.value in _ASSIGN_OPS:
            self.advance()
            right = self.parse_assignment(allow_in=allow_in)
            return self.node("AssignmentExpression", [left, right], start,
                             {"operator": tok.value})
        return left

    def try_parse_arrow(self, allow_in: bool) -> Optional[AstNode]:
        tok = self.cur()
        if tok.type == "name" and (not tok.is_keyword or tok.value in _CONTEXTUAL):
            nxt = self.la()
            if nxt.type == "punct" and nxt.value == "=>" and not nxt.nl_before:
                start = self.advance()
                param = self.node("Identifier", [], start, {"name": start.value})
                return self.finish_arrow([param], start, allow_in)
            return None
        if tok.type == "punct" and tok.value == "(":
            close = self._matching_paren(self.i)
            if close is None:
                return None
            after = self.tokens[min(close + 1, len(self.tokens) - 1)]
            if after.type == "punct" and after.value == "=>" and not after.nl_before:
                start = self.advance()  # (
                params: list[AstNode] = []
                while not self.at(")"):
                    params.append(self.parse_binding_element())
                    if self.at(","):
                        self.advance()
                self.expect(")")
                return self.finish_arrow(params, start, allow_in)
        return None

    def _matching_paren(self, open_idx: int) -> Optional[int]:
        depth = 0
        j = open_idx
        while j < len(self.tokens):
            tok = self.tokens[j]
            if tok.type == "punct":
                if tok.value in ("(", "[", "{"):
                    depth += 1
                elif tok.value in (")", "]", "}"):
                    depth -= 1
                    if depth == 0:
                        return j
            elif tok.type == "eof":
                return None
            j += 1
        return None

    def finish_arrow(self, params: list[AstNode], start: Token,
                     allow_in: bool) -> AstNode:
        self.expect("=>")
        if self.at("{"):
            body = self.parse_block()
            expression = False
        else:
            body = self.parse_assignment(allow_in=allow_in)
            expression = True
        children = params + [body]
        return self.node("ArrowFunctionExpression", children, start,
                         {"param_idxs": list(range(len(params))),
                          "body_idx": len(params), "expression": expression})

    def parse_conditional(self, allow_in: bool = True) -> AstNode:
        start = self.cur()
        test = self.parse_binary(0, allow_in)
        if self.at("?") and not self.at("?."):
            self.advance()
            consequent = self.parse_assignment()
            self.expect(":")
            alternate = self.parse_assignment(allow_in=allow_in)
            return self.node("Opaque", [test, consequent, alternate], start,
                             {"estree": "ConditionalExpression"})
        return test

    def parse_binary(self, level: int, allow_in: bool) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary(allow_in)
        _, ops, kind = _BINARY_LEVELS[level]
        start = self.cur()
        left = self.parse_binary(level + 1, allow_in)
        while True:
            tok = self.cur()
            matches = (tok.type == "punct" and tok.value in ops) or \
                      (tok.type == "name" and tok.value in ops)
            if matches and tok.value == "in" and not allow_in:
                matches = False
            if not matches:
                return left
            self.advance()
            right = self.parse_binary(level + 1, allow_in)
            left = self.node(kind, [left, right], start,
                             {"operator": tok.value})

    def parse_unary(self, allow_in: bool) -> AstNode:
        tok = self.cur()
        if (tok.type == "punct" and tok.value in ("!", "~", "+", "-")) or \
                (tok.type == "name" and tok.value in ("typeof", "void", "delete")):
            start = self.advance()
            arg = self.parse_unary(allow_in)
            return self.node("Opaque", [arg], start,
                             {"estree": "UnaryExpression", "operator": start.value})
        if tok.type == "punct" and tok.value in ("++", "--"):
            start = self.advance()
            arg = self.parse_unary(allow_in)
            return self.node("Opaque", [arg], start,
                             {"estree": "UpdateExpression", "operator": start.value})
        return self.parse_postfix(allow_in)

    def parse_postfix(self, allow_in: bool) -> AstNode:
        start = self.cur()
        expr = self.parse_call_member()
        tok = self.cur()
        if tok.type == "punct" and tok.value in ("++", "--") and not tok.nl_before:
            self.advance()
            return self.node("Opaque", [expr], start,
                             {"estree": "UpdateExpression", "operator": tok.value})
        return expr

    def parse_call_member(self) -> AstNode:
        start = self.cur()
        if self.at_name("new"):
            self.advance()
            if self.at("."):  # new.target
                self.advance()
                self.advance()
                return self.node("Opaque", [], start, {"estree": "MetaProperty"})
            callee = self.parse_member_only()
            args: list[AstNode] = []
            if self.at("("):
                args = self.parse_arguments()
            return self.parse_call_tail(
                self.node("Opaque", [callee] + args, start,
                          {"estree": "NewExpression"}), start)
        expr = self.parse_primary()
        return self.parse_call_tail(expr, start)

    def parse_member_only(self) -> AstNode:
        """Member chain without call arguments (the `new` callee)."""
        start = self.cur()
        expr = self.parse_primary()
        while True:
            if self.at("."):
                self.advance()
                expr = self._member(expr, start, computed=False)
            elif self.at("["):
                self.advance()
                prop = self.parse_expression()
                self.expect("]")
                expr = self.node("MemberExpression", [expr, prop], start,
                                 {"computed": True})
            else:
                return expr

    def parse_call_tail(self, expr: AstNode, start: Token) -> AstNode:
        while True:
            if self.at(".") or self.at("?."):
                self.advance()
                expr = self._member(expr, start, computed=False)
            elif self.at("["):
                self.advance()
                prop = self.parse_expression()
                self.expect("]")
                expr = self.node("MemberExpression", [expr, prop], start,
                                 {"computed": True})
            elif self.at("("):
                args = self.parse_arguments()
                expr = self.node("CallExpression", [expr] + args, start)
            elif self.cur().type == "template":
                tok = self.advance()
                quasi = self.desugar_template(tok)
                expr = self.node("Opaque", [expr, quasi], start,
                                 {"estree": "TaggedTemplateExpression"})
            else:
                return expr

    def _member(self, obj: AstNode, start: Token, computed: bool) -> AstNode:
        tok = self.cur()
        if tok.type != "name":
            raise ParseError("expected property name", tok)
        self.advance()
        prop = self.node("Identifier", [], tok, {"name": tok.value})
        return self.node("MemberExpression", [obj, prop], start,
                         {"computed": computed})

    def parse_arguments(self) -> list[AstNode]:
        self.expect("(")
        args: list[AstNode] = []
        while not self.at(")"):
            if self.at("..."):
                sstart = self.advance()
                arg = self.parse_assignment()
                args.append(self.node("Opaque", [arg], sstart,
                                      {"estree": "SpreadElement"}))
            else:
                args.append(self.parse_assignment())
            if self.at(","):
                self.advance()
            elif not self.at(")"):
                raise ParseError("expected ',' or ')' in arguments", self.cur())
        self.expect(")")
        return args

    # ---- primary ----------------------------------------------------

    def parse_primary(self) -> AstNode:
        tok = self.cur()
        if tok.type == "num":
            self.advance()
            return self.node("Literal", [], tok, {"value": tok.value})
        if tok.type == "str":
            self.advance()
            return self.node("Literal", [], tok, {"value": tok.value})
        if tok.type == "regex":
            self.advance()
            return self.node("Literal", [], tok,
                             {"value": tok.value, "regex": True})
        if tok.type == "template":
            self.advance()
            return self.desugar_template(tok)
        if tok.type == "punct":
            if tok.value == "(":
                self.advance()
                expr = self.parse_expression()
                self.expect(")")
                return expr
            if tok.value == "[":
                return self.parse_array()
            if tok.value == "{":
                return self.parse_object()
        if tok.type == "name":
            v = tok.value
            if v == "this":
                self.advance()
                # `this` is modeled as a resolvable name; container calls
                # bind it to a synthetic page object entity.
                return self.node("Identifier", [], tok, {"name": "this"})
            if v in ("true", "false"):
                self.advance()
                return self.node("Literal", [], tok, {"value": v == "true"})
            if v == "null":
                self.advance()
                return self.node("Literal", [], tok, {"value": None})
            if v == "function":
                return self.parse_function(declaration=False)
            if v == "async" and self.la().type == "name" \
                    and self.la().value == "function":
                start = self.advance()
                fn = self.parse_function(declaration=False)
                return self._relabel_opaque(fn, start, "async function")
            if v == "class":
                return self.parse_class()
            if v == "super":
                self.advance()
                return self.node("Opaque", [], tok, {"estree": "Super"})
            if not tok.is_keyword or v in _CONTEXTUAL:
                self.advance()
                return self.node("Identifier", [], tok, {"name": v})
        raise ParseError(f"unexpected token {tok.value!r}", tok)

    def _relabel_opaque(self, node: AstNode, start: Token, reason: str) -> AstNode:
        self.diag(f"{reason} treated as opaque", start)
        return AstNode("Opaque", node.children, node.span, node.raw,
                       dict(node.info, reason=reason))

    def parse_array(self) -> AstNode:
        start = self.expect("[")
        elements: list[AstNode] = []
        while not self.at("]"):
            if self.at(","):
                self.advance()  # elision hole
                continue
            if self.at("..."):
                sstart = self.advance()
                arg = self.parse_assignment()
                elements.append(self.node("Opaque", [arg], sstart,
                                          {"estree": "SpreadElement"}))
            else:
                elements.append(self.parse_assignment())
            if self.at(","):
                self.advance()
            elif not self.at("]"):
                raise ParseError("expected ',' or ']' in array", self.cur())
        self.expect("]")
        return self.node("ArrayExpression", elements, start)

    def parse_object(self) -> AstNode:
        start = self.expect("{")
        properties: list[AstNode] = []
        while not self.at("}"):
            properties.append(self.parse_property())
            if self.at(","):
                self.advance()
            elif not self.at("}"):
                raise ParseError("expected ',' or '}' in object", self.cur())
        self.expect("}")
        return self.node("ObjectExpression", properties, start)

    def parse_property(self) -> AstNode:
        start = self.cur()
        if self.at("..."):
            self.advance()
            arg = self.parse_assignment()
            return self.node("Opaque", [arg], start, {"estree": "SpreadElement"})
        accessor = None
        if (self.at_name("get") or self.at_name("set")):
            after = self.la()
            if after.type in ("name", "str", "num") or \
                    (after.type == "punct" and after.value == "["):
                accessor = self.advance().value
        generator = False
        if self.at("*"):
            self.advance()
            generator = True
        key = self.parse_property_key()
        if accessor is not None:
            params = self.parse_params()
            body = self.parse_block()
            fn = self.node("FunctionExpression", params + [body], start,
                           {"name_idx": None,
                            "param_idxs": list(range(len(params))),
                            "body_idx": len(params)})
            return self.node("Property", [key, fn], start,
                             {"kind": accessor, "method": False})
        if self.at("("):
            params = self.parse_params()
            body = self.parse_block()
            fn = self.node("FunctionExpression", params + [body], start,
                           {"name_idx": None,
                            "param_idxs": list(range(len(params))),
                            "body_idx": len(params)})
            if generator:
                fn = AstNode("Opaque", fn.children, fn.span, fn.raw,
                             dict(fn.info, estree="GeneratorFunction"))
            return self.node("Property", [key, fn], start,
                             {"kind": "init", "method": True})
        if self.at(":"):
            self.advance()
            value = self.parse_assignment()
            return self.node("Property", [key, value], start, {"kind": "init"})
        if key.kind != "Identifier":
            raise ParseError("expected ':' after property key", self.cur())
        if self.at("="):  # shorthand with default: pattern context only
            self.advance()
            value = self.parse_assignment()
            pat = self.node("Opaque", [key, value], start,
                            {"estree": "AssignmentPattern"})
            return self.node("Property", [key, pat], start,
                             {"kind": "init", "shorthand": True})
        value = AstNode("Identifier", [], key.span, key.raw,
                        {"name": key.info["name"]})
        return self.node("Property", [key, value], start,
                         {"kind": "init", "shorthand": True})

    def parse_property_key(self) -> AstNode:
        tok = self.cur()
        if tok.type == "name":
            self.advance()
            return self.node("Identifier", [], tok, {"name": tok.value})
        if tok.type in ("str", "num"):
            self.advance()
            return self.node("Literal", [], tok, {"value": tok.value})
        if tok.type == "punct" and tok.value == "[":
            self.advance()
            expr = self.parse_assignment()
            self.expect("]")
            expr.info["computed_key"] = True
            return expr
        raise ParseError("expected property key", tok)

    # ---- template desugaring ----------------------------------------

    def desugar_template(self, tok: Token) -> AstNode:
        """Lower a template literal to nested string concatenation."""
        segments: TemplateSegments = tok.value
        span = Span(tok.line, tok.col, tok.end_line, tok.end_col)
        if not segments.expressions:
            return AstNode("Literal", [], span, "", {"value": segments.strings[0]})
        acc = AstNode("Literal", [], span, "", {"value": segments.strings[0]})
        for idx, (src, line, col) in enumerate(segments.expressions):
            expr = parse_expression_text(src, line, col, self.diagnostics)
            acc = AstNode("BinaryExpression", [acc, expr], span, "",
                          {"operator": "+"})
            tail = AstNode("Literal", [], span, "",
                           {"value": segments.strings[idx + 1]})
            acc = AstNode("BinaryExpression", [acc, tail], span, "",
                          {"operator": "+"})
        return acc


def parse_expression_text(src: str, line: int, col: int,
                          diagnostics: list) -> AstNode:
    """Parse an embedded expression slice at its absolute position."""
    sub = Parser.__new__(Parser)
    sub.src = src
    sub.tokens, lex_diags = tokenize(src, line, col)
    sub.i = 0
    sub.diagnostics = diagnostics
    for d in lex_diags:
        diagnostics.append({"message": d.message, "line": d.line, "col": d.col})
    try:
        return sub.parse_expression()
    except ParseError as err:
        diagnostics.append({"message": err.message, "line": err.token.line,
                            "col": err.token.col})
        return AstNode("Opaque", [], Span(line, col, line, col), src,
                       {"reason": "template expression"})


def parse_js(source: str) -> AstNode:
    """Parse JavaScript source into a Program node.

    Unsupported constructs become Opaque nodes and are counted in
    ``program.info["diagnostics"]``. Raises FatalSyntaxError only when the
    tokenizer cannot resynchronize at all.
    """
    parser = Parser(source)
    program = parser.parse_program()
    number_nodes(program)
    return program
