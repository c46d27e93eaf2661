//! Identifiers and the interest/data packet carriers, including the query
//! extension fields.

use std::fmt;

use thiserror::Error;

use crate::name::ContentName;
use crate::time::SimTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A face on one node. `FaceId::APP` is the local application face; link
/// faces are numbered from 1 in link-declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub usize);

impl FaceId {
    pub const APP: FaceId = FaceId(0);

    pub fn is_app(self) -> bool {
        self == FaceId::APP
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_app() {
            f.write_str("app")
        } else {
            write!(f, "f{}", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nonce(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PacketError {
    #[error("query name {0} equals the requested name")]
    QueryEqualsName(ContentName),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterestPacket {
    pub name: ContentName,
    /// Carried opaquely, never interpreted.
    pub selector: String,
    pub nonce: Nonce,
    query_name: Option<ContentName>,
    emit_time: SimTime,
    pub origin: NodeId,
}

impl InterestPacket {
    pub fn new(name: ContentName, nonce: Nonce, emit_time: SimTime, origin: NodeId) -> Self {
        InterestPacket {
            name,
            selector: String::new(),
            nonce,
            query_name: None,
            emit_time,
            origin,
        }
    }

    pub fn emit_time(&self) -> SimTime {
        self.emit_time
    }

    pub fn query_name(&self) -> Option<&ContentName> {
        self.query_name.as_ref()
    }

    pub fn set_query_name(&mut self, query: ContentName) -> Result<(), PacketError> {
        if query == self.name {
            return Err(PacketError::QueryEqualsName(query));
        }
        self.query_name = Some(query);
        Ok(())
    }

    pub fn with_query_name(mut self, query: ContentName) -> Result<Self, PacketError> {
        self.set_query_name(query)?;
        Ok(self)
    }

    /// Same request under a new nonce, as used for retransmission.
    pub fn renewed(&self, nonce: Nonce) -> Self {
        InterestPacket {
            nonce,
            ..self.clone()
        }
    }
}

/// Answer to a piggybacked query: `holder` caches `name` and expects to keep it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub name: ContentName,
    pub holder: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataPacket {
    pub name: ContentName,
    pub payload_size: u32,
    pub signature: String,
    pub signature_info: String,
    pub query_result: Option<QueryResult>,
}

impl DataPacket {
    pub fn new(name: ContentName, payload_size: u32) -> Self {
        DataPacket {
            name,
            payload_size,
            signature: String::new(),
            signature_info: String::new(),
            query_result: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packet {
    Interest(InterestPacket),
    Data(DataPacket),
}

impl Packet {
    pub fn name(&self) -> &ContentName {
        match self {
            Packet::Interest(i) => &i.name,
            Packet::Data(d) => &d.name,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::parse_name;

    #[test]
    fn query_name_must_differ_from_name() {
        let name = parse_name("/Sea/x").unwrap();
        let mut interest = InterestPacket::new(name.clone(), Nonce(1), SimTime::ZERO, NodeId(0));
        assert_eq!(
            interest.set_query_name(name.clone()),
            Err(PacketError::QueryEqualsName(name))
        );
        assert!(interest.query_name().is_none());
        interest.set_query_name(parse_name("/Chi/y").unwrap()).unwrap();
        assert_eq!(interest.query_name().unwrap().to_string(), "/Chi/y");
    }

    #[test]
    fn renewal_keeps_emit_time_and_query() {
        let interest = InterestPacket::new(
            parse_name("/Sea/x").unwrap(),
            Nonce(1),
            SimTime::from_millis(12),
            NodeId(3),
        )
        .with_query_name(parse_name("/Chi/y").unwrap())
        .unwrap();
        let again = interest.renewed(Nonce(9));
        assert_eq!(again.nonce, Nonce(9));
        assert_eq!(again.emit_time(), SimTime::from_millis(12));
        assert_eq!(again.query_name(), interest.query_name());
    }

    #[test]
    fn face_display() {
        assert_eq!(FaceId::APP.to_string(), "app");
        assert_eq!(FaceId(3).to_string(), "f3");
        assert!(!FaceId(3).is_app());
    }
}
