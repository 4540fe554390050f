
DEFAULT_TEMPLATE = """
bpldiff campaign report
=======================
Programs: {{ report.total.total }}, {% if report.verified %}{{ report.total.verified }} verified with Boogie{% else %}execution only{% endif %}


Program statistics (min/median/max)
-----------------------------------
{{ "%-16s"|format("batch") }}{{ "%10s"|format("programs") }}
{%- for f in stat_fields %}{{ "%16s"|format(f[2:]) }}{% endfor %}

{% for row in rows %}
{{ "%-16s"|format(row.label) }}{{ "%10d"|format(row.total) }}
{%- for f in stat_fields %}{{ "%16s"|format(row.stats[f].text) }}{% endfor %}

{% endfor %}


Execution outcomes
------------------
{{ "%-16s"|format("batch") }}
{%- for k in exec_kinds %}{{ "%18s"|format(k) }}{% endfor %}

{% for row in rows %}
{{ "%-16s"|format(row.label) }}
{%- for k in exec_kinds %}{{ "%18s"|format(cell(row.exec_counts[k], row.total)) }}{% endfor %}

{% endfor %}
{% if report.verified %}


Boogie outcomes
---------------
{{ "%-16s"|format("batch") }}
{%- for k in boogie_kinds %}{{ "%18s"|format(k) }}{% endfor %}

{% for row in rows %}
{{ "%-16s"|format(row.label) }}
{%- for k in boogie_kinds %}{{ "%18s"|format(cell(row.boogie_counts[k], row.verified)) }}{% endfor %}

{% endfor %}


Verdicts
--------
{{ "%-16s"|format("batch") }}
{%- for v in verdict_labels %}{{ "%24s"|format(v) }}{% endfor %}

{% for row in rows %}
{{ "%-16s"|format(row.label) }}
{%- for v in verdict_labels %}{{ "%24s"|format(cell(row.verdict_counts[v], row.verified)) }}{% endfor %}

{% endfor %}


Execution against Boogie (all programs)
---------------------------------------
{{ "%-16s"|format("exec \\\\ boogie") }}
{%- for b in boogie_kinds %}{{ "%18s"|format(b) }}{% endfor %}

{% for e in exec_kinds %}
{{ "%-16s"|format(e) }}
{%- for b in boogie_kinds %}{{ "%18s"|format(cell(report.total.matrix[e][b], report.total.verified)) }}{% endfor %}

{% endfor %}


Completeness mismatches rerun with invariant inference
------------------------------------------------------
{{ "%-16s"|format("batch") }}
{%- for c in class_labels %}{{ "%20s"|format(c) }}{% endfor %}

{% for row in rows %}
{{ "%-16s"|format(row.label) }}
{%- for c in class_labels %}{{ "%20s"|format(row.classes[c]) }}{% endfor %}

{% endfor %}
Rerun outcomes: {% for k, n in report.rerun_counts.items() if n %}{{ k }} {{ n }}{% if not loop.last %}, {% endif %}{% else %}none{% endfor %}



Ratios
------
Correct programs verified:      {{ ratios.correct_verified }}%
Correct programs rejected:      {{ ratios.correct_rejected }}%
Incorrect programs confirmed:   {{ ratios.incorrect_confirmed }}%
Cured by inference:             {{ ratios.inference_cured }}%
Resisting inference:            {{ ratios.inference_resistant }}%
{% if report.crashes %}


Crashes
-------
{% for program in report.crashes %}
{{ program }}
{% endfor %}
{% endif %}
{% if report.review.cured or report.review.resisting %}


Review sample
-------------
Cured by inference: {{ report.review.cured|join(", ") or "none" }}
Resisting inference: {{ report.review.resisting|join(", ") or "none" }}
{% endif %}
{% endif %}


Findings
--------
{% if report.findings %}
{{ "%-8s"|format("State") }} {{ "%-14s"|format("Finding") }} Message
{% for finding in report.findings %}
{{ "%-8s"|format(finding.state) }} {{ "%-14s"|format(finding.finding) }} {{ finding.message }}
{% endfor %}
{% endif %}
{% if not report.findings %}Without warnings or errors
{% endif %}
"""
