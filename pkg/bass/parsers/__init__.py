# Input file parsers
