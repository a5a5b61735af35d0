use std::fmt;

use super::ParseError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Tok {
    Ident(String),
    Zero,
    LParen,
    RParen,
    Comma,
    Bar,
    Bang,
    Star,
    At,
    Arrow,
    For,
    New,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Star => f.write_str("`*`"),
            Tok::At => f.write_str("`@`"),
            Tok::Arrow => f.write_str("`<-`"),
            Tok::For => f.write_str("`for`"),
            Tok::New => f.write_str("`new`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let bump = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            bump(1, &mut i, &mut col);
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Bar),
            '!' => Some(Tok::Bang),
            '*' => Some(Tok::Star),
            '@' => Some(Tok::At),
            '0' => Some(Tok::Zero),
            _ => None,
        };
        if let Some(tok) = single {
            if tok == Tok::Zero && chars.get(i + 1).is_some_and(|d| d.is_ascii_alphanumeric()) {
                return Err(ParseError::new(l0, c0, "identifiers cannot start with a digit"));
            }
            out.push(Spanned { tok, line: l0, col: c0 });
            bump(1, &mut i, &mut col);
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'-') {
            out.push(Spanned { tok: Tok::Arrow, line: l0, col: c0 });
            bump(2, &mut i, &mut col);
            continue;
        }
        if c == '←' {
            out.push(Spanned { tok: Tok::Arrow, line: l0, col: c0 });
            bump(1, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
                col += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "for" => Tok::For,
                "new" => Tok::New,
                _ => Tok::Ident(word),
            };
            out.push(Spanned { tok, line: l0, col: c0 });
            continue;
        }
        return Err(ParseError::new(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
