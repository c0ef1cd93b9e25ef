use crate::error::{Error, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `#t`, `#f`, `#top`, `#bot`
    TruthLit(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eq,
    IntEq,
    LAngle,
    RAngle,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::TruthLit(s) => format!("`#{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::IntEq => "`=in=`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Tokenizes `src`; `origin` shifts reported positions (used when the
/// formula is embedded in a KB file line).
pub(crate) fn tokenize(src: &str, origin: Pos) -> Result<Vec<Token>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = origin.line.max(1);
    let mut col = origin.col.max(1);

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let rest = &chars[i..];
        let starts = |s: &str| {
            let s: Vec<char> = s.chars().collect();
            rest.len() >= s.len() && rest[..s.len()] == s[..]
        };
        let (tok, len) = if starts("<->") {
            (Tok::DArrow, 3)
        } else if starts("->") {
            (Tok::Arrow, 2)
        } else if starts("=in=") {
            (Tok::IntEq, 4)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                '~' => (Tok::Tilde, 1),
                '&' => (Tok::Amp, 1),
                '|' => (Tok::Bar, 1),
                '=' => (Tok::Eq, 1),
                '<' => (Tok::LAngle, 1),
                '>' => (Tok::RAngle, 1),
                '#' => {
                    let word: String = rest[1..]
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                        .collect();
                    if !matches!(word.as_str(), "t" | "f" | "top" | "bot") {
                        return Err(Error::parse(
                            pos,
                            format!("unknown truth constant `#{word}`"),
                        ));
                    }
                    let n = word.len() + 1;
                    (Tok::TruthLit(word), n)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let word: String = rest
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                        .collect();
                    let n = word.len();
                    (Tok::Ident(word), n)
                }
                other => {
                    return Err(Error::parse(pos, format!("unexpected character `{other}`")));
                }
            }
        };
        out.push(Token { tok, pos });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
