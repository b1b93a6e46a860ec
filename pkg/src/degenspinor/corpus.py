"""Golden expression corpus used by the parser round-trip and error checks."""

VARIABLES = ("s0", "s1", "t", "x", "y", "z", "u")
CONSTANTS = {"k1": 0.3, "k2": -0.2, "k3": 0.7, "m": 1.0}

EXPRESSIONS = (
    "1",
    "0.5",
    "2.5e-3",
    "1e10",
    "3.0E+2",
    "x",
    "-x",
    "+x",
    "--x",
    "2+3*4",
    "2+3*4^2",
    "-2^2",
    "(-2)^2",
    "2^3^2",
    "(2^3)^2",
    "2^-1",
    "x^2*y",
    "k1*s0 + k2*s0 - k3",
    "s0^2*exp(-s0)",
    "sin(s0)*exp(s0)",
    "sin(x)+cos(y)-tan(z)",
    "exp(-t^2)*cos(2*t)",
    "log(1+x^2)",
    "sqrt(1+y^2)",
    "sinh(x)*cosh(y)/tanh(1+z^2)",
    "abs(x-y)",
    "pi*x",
    "e^t",
    "m^2*cos(pi/6)^2",
    "((x))",
    "x/y/z",
    "x-(y-z)",
    "x-y-z",
    "x/(y*z)",
    "x*(y+z)",
    "-(x+y)*z",
    "-x*y",
    "x*-y",
    "x--y",
    "t*x*y*z",
    "sin(t)*x",
    "x*y*z",
    "t^2",
    "exp(-(t-x)^2/2)",
    "cos(s0)^2+sin(s0)^2",
    "s1*s0 + sin(s1)",
    "u*u*u - 3*u + 1",
    "1/(1+exp(-x))",
    "2*pi*sqrt(abs(z))",
    "tanh(0.5)",
)

# (source, error class name, byte offset)
MALFORMED = (
    ("sin(", "ExprSyntaxError", 4),
    ("", "ExprSyntaxError", 0),
    ("2+", "ExprSyntaxError", 2),
    ("(1+2", "ExprSyntaxError", 4),
    ("1+2)", "ExprSyntaxError", 3),
    ("3 4", "ExprSyntaxError", 2),
    ("2*#", "ExprSyntaxError", 2),
    ("foo(1)", "UnknownIdentifier", 0),
    ("x + q", "UnknownIdentifier", 4),
    ("sin(1,2)", "ArityError", 5),
    ("cos()", "ArityError", 4),
    ("é+1", "ExprSyntaxError", 0),
    ("x*é", "ExprSyntaxError", 2),
    ("1.2.3", "ExprSyntaxError", 3),
)
