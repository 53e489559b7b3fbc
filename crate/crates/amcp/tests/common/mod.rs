#![allow(dead_code)]

use std::collections::HashMap;

/// Byte-level class-file assembler. Pool indices are handed out as entries
/// are added, honouring the two-slot rule for longs and doubles.
pub struct ClassBuilder {
    pool: Vec<u8>,
    next: u16,
    major: u16,
}

impl Default for ClassBuilder {
    fn default() -> Self {
        ClassBuilder {
            pool: Vec::new(),
            next: 1,
            major: 52,
        }
    }
}

impl ClassBuilder {
    pub fn utf8(&mut self, s: &str) -> u16 {
        self.utf8_raw(s.as_bytes())
    }

    pub fn utf8_raw(&mut self, bytes: &[u8]) -> u16 {
        self.pool.push(1);
        self.pool.extend((bytes.len() as u16).to_be_bytes());
        self.pool.extend(bytes);
        self.bump(1)
    }

    pub fn class(&mut self, name: &str) -> u16 {
        let n = self.utf8(name);
        self.pool.push(7);
        self.pool.extend(n.to_be_bytes());
        self.bump(1)
    }

    pub fn long(&mut self, v: i64) -> u16 {
        self.pool.push(5);
        self.pool.extend(v.to_be_bytes());
        self.bump(2)
    }

    pub fn double(&mut self, v: f64) -> u16 {
        self.pool.push(6);
        self.pool.extend(v.to_be_bytes());
        self.bump(2)
    }

    pub fn integer(&mut self, v: i32) -> u16 {
        self.pool.push(3);
        self.pool.extend(v.to_be_bytes());
        self.bump(1)
    }

    pub fn string(&mut self, s: &str) -> u16 {
        let n = self.utf8(s);
        self.pool.push(8);
        self.pool.extend(n.to_be_bytes());
        self.bump(1)
    }

    pub fn name_and_type(&mut self, name: &str, descriptor: &str) -> u16 {
        let (n, d) = (self.utf8(name), self.utf8(descriptor));
        self.pool.push(12);
        self.pool.extend(n.to_be_bytes());
        self.pool.extend(d.to_be_bytes());
        self.bump(1)
    }

    pub fn method_ref(&mut self, class: u16, nat: u16) -> u16 {
        self.pool.push(10);
        self.pool.extend(class.to_be_bytes());
        self.pool.extend(nat.to_be_bytes());
        self.bump(1)
    }

    /// Appends raw bytes as one pool entry (for malformed input).
    pub fn raw(&mut self, bytes: &[u8]) -> u16 {
        self.pool.extend(bytes);
        self.bump(1)
    }

    fn bump(&mut self, slots: u16) -> u16 {
        let i = self.next;
        self.next += slots;
        i
    }

    pub fn finish(&self, this_class: u16, super_class: u16) -> Vec<u8> {
        let mut out = vec![0xCA, 0xFE, 0xBA, 0xBE, 0, 0];
        out.extend(self.major.to_be_bytes());
        out.extend(self.next.to_be_bytes());
        out.extend(&self.pool);
        out.extend(0x0021u16.to_be_bytes());
        out.extend(this_class.to_be_bytes());
        out.extend(super_class.to_be_bytes());
        // interfaces, fields, methods, attributes
        out.extend([0u8; 8]);
        out
    }
}

/// A class named `name` extending Object and referencing `refs`.
pub fn simple_class(name: &str, refs: &[&str]) -> Vec<u8> {
    let mut b = ClassBuilder::default();
    let this = b.class(name);
    let object = b.class("java/lang/Object");
    for r in refs {
        b.class(r);
    }
    b.finish(this, object)
}

/// TurboMQ by direct summation over an edge list, cluster factor 0 for
/// clusters without internal edges.
pub fn naive_turbomq(edges: &[(String, String, u64)], cluster: &HashMap<String, String>) -> f64 {
    let mut mu: HashMap<&str, f64> = HashMap::new();
    let mut eps: HashMap<&str, f64> = HashMap::new();
    for (s, t, w) in edges {
        if s == t {
            continue;
        }
        let (cs, ct) = (cluster[s].as_str(), cluster[t].as_str());
        if cs == ct {
            *mu.entry(cs).or_default() += *w as f64;
        } else {
            *eps.entry(cs).or_default() += *w as f64;
            *eps.entry(ct).or_default() += *w as f64;
        }
    }
    let mut labels: Vec<&str> = cluster.values().map(String::as_str).collect();
    labels.sort();
    labels.dedup();
    labels
        .iter()
        .map(|c| {
            let m = mu.get(c).copied().unwrap_or(0.0);
            if m == 0.0 {
                0.0
            } else {
                m / (m + 0.5 * eps.get(c).copied().unwrap_or(0.0))
            }
        })
        .sum()
}

pub fn cluster_count(cluster: &HashMap<String, String>) -> usize {
    let mut labels: Vec<&String> = cluster.values().collect();
    labels.sort();
    labels.dedup();
    labels.len()
}

pub type Outcome = Result<(String, Vec<String>), amcp::extraction::ClassFileError>;

fn ok(name: &str, refs: &[&str]) -> Outcome {
    let mut refs: Vec<String> = refs.iter().map(|s| s.to_string()).collect();
    refs.sort();
    Ok((name.to_owned(), refs))
}

/// A class exercising every pool entry kind the parser must step over.
pub fn rich_class() -> Vec<u8> {
    let mut b = ClassBuilder::default();
    let this = b.class("com/acme/Rich");
    let object = b.class("java/lang/Object");
    b.long(-1);
    let list = b.class("java/util/List");
    b.double(2.5);
    b.integer(7);
    b.string("hello");
    let nat = b.name_and_type("size", "()I");
    b.method_ref(list, nat);
    b.class("[[Lcom/acme/Item;");
    b.class("[J");
    b.class("[Lcom/acme/Rich;");
    b.finish(this, object)
}

/// Hand-assembled inputs with the outcome the parser must report.
pub fn corpus() -> Vec<(&'static str, Vec<u8>, Outcome)> {
    use amcp::extraction::ClassFileError as E;
    let mut cases = Vec::new();

    cases.push(("minimal", simple_class("Min", &[]), ok("Min", &["java/lang/Object"])));
    cases.push((
        "rich",
        rich_class(),
        ok(
            "com/acme/Rich",
            &["com/acme/Item", "java/lang/Object", "java/util/List"],
        ),
    ));

    let mut b = ClassBuilder::default();
    b.long(1);
    b.double(1.0);
    let this = b.class("p/Wide");
    b.long(2);
    let sup = b.class("p/Base");
    cases.push(("two-slot entries", b.finish(this, sup), ok("p/Wide", &["p/Base"])));

    let mut b = ClassBuilder::default();
    let this = b.class("p/Arrays");
    let sup = b.class("java/lang/Object");
    b.class("[[Lcom/a/B;");
    b.class("[I");
    b.class("[[[D");
    cases.push((
        "array descriptors",
        b.finish(this, sup),
        ok("p/Arrays", &["com/a/B", "java/lang/Object"]),
    ));

    let mut b = ClassBuilder::default();
    let name = b.utf8_raw(&[b'p', b'/', 0xED, 0xA0, 0xBD, 0xED, 0xB8, 0x80]);
    let this = b.raw(&[7, (name >> 8) as u8, name as u8]);
    let sup = b.class("java/lang/Object");
    cases.push((
        "modified utf-8",
        b.finish(this, sup),
        ok("p/\u{1F600}", &["java/lang/Object"]),
    ));

    let valid = simple_class("Min", &["a/B"]);
    cases.push(("truncated pool", valid[..16].to_vec(), Err(E::MalformedPool)));
    cases.push((
        "truncated after pool",
        valid[..valid.len() - 12].to_vec(),
        Err(E::TruncatedHeader),
    ));
    cases.push(("magic only", vec![0xCA, 0xFE, 0xBA, 0xBE], Err(E::TruncatedHeader)));

    let mut bad = valid.clone();
    bad[0] = 0xCB;
    cases.push(("bad magic", bad, Err(E::NotClassFile)));
    cases.push(("empty", Vec::new(), Err(E::NotClassFile)));

    let mut b = ClassBuilder::default();
    let this = b.class("p/Q");
    b.raw(&[2, 0, 0]);
    cases.push(("unknown tag", b.finish(this, this), Err(E::UnsupportedTag(2))));

    // a long claiming only the last slot
    let mut b = ClassBuilder::default();
    let this = b.class("p/Q");
    b.raw(&[5, 0, 0, 0, 0, 0, 0, 0, 0]);
    cases.push(("long in last slot", b.finish(this, this), Err(E::MalformedPool)));

    let mut b = ClassBuilder::default();
    let name = b.utf8("p/Q");
    cases.push((
        "this_class not a class",
        b.finish(name, name),
        Err(E::BadIndex(name, "Class")),
    ));

    let mut b = ClassBuilder::default();
    let n = b.integer(3);
    let this = b.raw(&[7, 0, n as u8]);
    cases.push(("class name not utf8", b.finish(this, this), Err(E::BadIndex(n, "Utf8"))));

    let mut b = ClassBuilder::default();
    let this = b.class("p/Q");
    cases.push((
        "this_class out of range",
        b.finish(this + 40, this),
        Err(E::BadIndex(this + 40, "Class")),
    ));

    cases
}

pub fn outcome(bytes: &[u8]) -> Outcome {
    amcp::extraction::parse_class_file(bytes).map(|s| (s.class_name, s.referenced_classes.into_iter().collect()))
}
