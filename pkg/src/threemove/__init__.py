"""Classification of links modulo 3-moves.

Subpackages cover: PD-code link diagrams and canonical signatures
(:mod:`.diagrams`), plantri ingestion and configuration filtering
(:mod:`.polyhedra`), Reidemeister/3-move rewriting and the exclusion searches
(:mod:`.rewrite`), braid words and the Vogel conversion (:mod:`.braids`,
:mod:`.vogel`), coset enumeration for the finite braid quotients
(:mod:`.groups`), Burnside certificates over GF(3) (:mod:`.burnside`),
bracket/Jones invariants (:mod:`.invariants`) and the resumable pipeline
(:mod:`.pipeline`).
"""

__version__ = "0.1.0"
