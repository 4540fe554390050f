from bpldiff.campaign import aggregate, diff_program, run_campaign
from bpldiff.consistency import check, classify_incompleteness
from bpldiff.executor import execute
from bpldiff.generator import gen_batch, gen_program
from bpldiff.syntax.boogie import emit_boogie
from bpldiff.syntax.sexpr import emit_sexpr, parse_sexpr
