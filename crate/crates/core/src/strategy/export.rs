use serde::{Deserialize, Serialize};

use super::{Representation, ScenarioShape};
use crate::Result;

/// JSON form of a vertex table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexTableJson {
    pub shape: ScenarioShape,
    pub representation: Representation,
    pub vertices: Vec<Vec<u8>>,
}

/// Vertex table as CSV: header of coordinate names, then one 0/1 row per vertex.
pub fn vertices_csv(rep: Representation) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(rep.labels())?;
    for row in rep.vertex_rows() {
        writer.write_record(row.iter().map(|b| b.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn vertices_json(rep: Representation) -> Result<String> {
    let table = VertexTableJson {
        shape: rep.shape(),
        representation: rep,
        vertices: rep.vertex_rows(),
    };
    Ok(serde_json::to_string_pretty(&table)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let csv = vertices_csv(Representation::Full26).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 65);
        assert!(lines[0].starts_with("a0,a1,b0,b1,c0,c1,a0b0,"));
        assert!(lines[0].ends_with(",a1b1c1"));
        assert_eq!(lines[1], vec!["0"; 26].join(","));

        let csv = vertices_csv(Representation::Reduced8).unwrap();
        assert_eq!(csv.lines().count(), 17);
        assert_eq!(csv.lines().next().unwrap(), "a0,a1,c0,c1,a0c0,a0c1,a1c0,a1c1");
    }

    #[test]
    fn json_shape() {
        let json = vertices_json(Representation::Reduced8).unwrap();
        let table: VertexTableJson = serde_json::from_str(&json).unwrap();
        assert_eq!(table.shape, ScenarioShape::REDUCED);
        assert_eq!(table.vertices.len(), 16);
        assert!(table.vertices.iter().all(|v| v.len() == 8));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["representation"], "reduced-8");
    }
}
