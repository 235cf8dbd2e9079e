//! CSV export of statically unrolled rows.

use std::io::Write;

use nestprof_core::unroll::StaticTable;

/// Header is the serialized column paths plus a leading `_doc` column; nulls
/// are empty fields.
pub fn write_csv<W: Write>(table: &StaticTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["_doc".to_string()];
    header.extend(table.columns().iter().map(ToString::to_string));
    w.write_record(&header)?;
    for row in table.rows() {
        let mut fields = vec![row.doc.to_string()];
        fields.extend(row.cells.iter().map(|c| c.as_ref().map_or(String::new(), ToString::to_string)));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::{parse_str, Format};
    use nestprof_core::unroll::static_unroll;

    #[test]
    fn writes_header_and_rows() {
        let c = parse_str(r#"{"a":[1,2],"b":null}"#, Format::JsonLines).unwrap();
        let mut buf = Vec::new();
        write_csv(&static_unroll(&c), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "_doc,$.a[*],$.b\n1,1,\n1,2,\n");
    }
}
