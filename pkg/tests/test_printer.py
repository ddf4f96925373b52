import unittest

from hypothesis import given, settings, strategies as st

from donormatch.parser import parse_query
from donormatch.printer import format_condition, pretty_print
from donormatch.query_ast import And, Not, Or, Predicate, QueryAst


_KEYWORDS = {"select", "from", "where", "and", "or", "not"}

identifiers = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,8}", fullmatch=True).filter(
    lambda s: s.lower() not in _KEYWORDS
)
labels = st.text(alphabet="abcdefghijklmnopqrstuvwxyzABC XYZ0123456789_-", min_size=1, max_size=12).filter(
    lambda s: s.strip() != ""
)
predicates = st.builds(Predicate, identifiers, labels)
conditions = st.recursive(
    predicates,
    lambda children: st.one_of(
        st.builds(And, children, children),
        st.builds(Or, children, children),
        st.builds(Not, children),
    ),
    max_leaves=12,
)
queries = st.builds(QueryAst, st.one_of(identifiers, labels), conditions)

A = Predicate("a", "x")
B = Predicate("b", "y")
C = Predicate("c", "z")


class Test_Printer(unittest.TestCase):
    def test_reference_query(self):
        ast = QueryAst(
            "Data Pendonor",
            And(And(Predicate("jarak", "Dekat"), Predicate("usia", "Baya")), Predicate("waktu_donor", "Lama")),
        )
        self.assertEqual(
            pretty_print(ast),
            'SELECT * FROM "Data Pendonor" WHERE (jarak = "Dekat") AND (usia = "Baya") AND (waktu_donor = "Lama")',
        )

    def test_minimal_parentheses(self):
        self.assertEqual(format_condition(Or(A, And(B, C))), '(a = "x") OR (b = "y") AND (c = "z")')
        self.assertEqual(format_condition(And(Or(A, B), C)), '((a = "x") OR (b = "y")) AND (c = "z")')
        self.assertEqual(format_condition(And(A, And(B, C))), '(a = "x") AND ((b = "y") AND (c = "z"))')
        self.assertEqual(format_condition(Or(A, Or(B, C))), '(a = "x") OR ((b = "y") OR (c = "z"))')
        self.assertEqual(format_condition(Not(And(A, B))), 'NOT ((a = "x") AND (b = "y"))')
        self.assertEqual(format_condition(Not(Not(A))), 'NOT NOT (a = "x")')

    def test_table_quoting(self):
        self.assertEqual(pretty_print(QueryAst("donors", A)), 'SELECT * FROM donors WHERE (a = "x")')
        self.assertEqual(pretty_print(QueryAst("Where", A)), 'SELECT * FROM "Where" WHERE (a = "x")')
        self.assertEqual(pretty_print(QueryAst("blood-bank", A)), 'SELECT * FROM "blood-bank" WHERE (a = "x")')

    @settings(max_examples=500)
    @given(queries)
    def test_print_then_parse_is_identity(self, ast: QueryAst):
        printed = pretty_print(ast)
        reparsed = parse_query(printed)
        self.assertEqual(reparsed, ast)
        self.assertEqual(pretty_print(reparsed), printed)
