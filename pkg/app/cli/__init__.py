"""
Command verbs
-------------
One module per verb, each exposing a click command that ``app.main``
registers on the top-level group.
"""
