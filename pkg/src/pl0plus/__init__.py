"""pl0+ compiler toolchain: lexer, parser, semantic analysis, p+ code
generation, XML intermediate files and a stack-machine interpreter."""

__version__ = "0.1.0"
